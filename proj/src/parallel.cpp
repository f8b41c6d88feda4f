#include "onoma/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "onoma/error.hpp"

namespace onoma::parallel {

namespace {
int g_default_threads = 0;
}

void set_threads(int n) {
  if (n < 0) throw ConfigError("thread count must be >= 0");
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(n == 0 ? g_default_threads : n);
}

int configure_from_env() {
  const char* raw = std::getenv("ONOMA_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
  } catch (const std::exception&) {
    throw ConfigError(std::string("ONOMA_THREADS must be a non-negative integer, got ") + raw);
  }
  set_threads(n);
  return n;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace onoma::parallel
