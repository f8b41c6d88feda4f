#include "onoma/features.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "onoma/error.hpp"
#include "onoma/text.hpp"

namespace onoma::features {

void NGramConfig::validate() const {
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (int n : n_values) {
    if (n < 1 || n > 8) throw ConfigError("n-gram size must be in [1, 8], got " + std::to_string(n));
  }
  if (!std::is_sorted(n_values.begin(), n_values.end()) ||
      std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end()) {
    throw ConfigError("n_values must be strictly increasing");
  }
  for (const auto* m : {&start_marker, &end_marker}) {
    if (text::code_point_count(*m) != 1 || *m == " ") {
      throw ConfigError("boundary markers must be single non-space characters");
    }
  }
  if (start_marker == end_marker) throw ConfigError("boundary markers must differ");
}

namespace detail {

std::vector<std::size_t> offsets(std::string_view s) { return text::code_point_offsets(s); }

void check_markers(std::string_view surname, const NGramConfig& config) {
  if (!config.pad_boundaries) return;
  if (surname.find(config.start_marker) != std::string_view::npos ||
      surname.find(config.end_marker) != std::string_view::npos) {
    throw InputError("surname '" + std::string(surname) +
                     "' contains a reserved boundary marker");
  }
}

}  // namespace detail

FeatureVector extract(std::string_view surname, const NGramConfig& config) {
  FeatureVector fv;
  for_each_ngram(surname, config, [&](std::string_view token) { ++fv[std::string(token)]; });
  return fv;
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_tokens)
    : tokens_(std::move(sorted_tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0 && !(tokens_[i - 1] < tokens_[i])) {
      throw InputError("vocabulary must be strictly sorted and duplicate-free");
    }
    index_.emplace(tokens_[i], i);
  }
}

std::size_t Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? tokens_.size() : it->second;
}

Vocabulary build_vocabulary(std::span<const std::string> corpus, const NGramConfig& config,
                            std::size_t min_df) {
  if (corpus.empty()) throw InputError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& surname : corpus) {
    // Tokens are views into a per-surname buffer; copy before it goes away.
    std::vector<std::string> tokens;
    for_each_ngram(surname, config, [&](std::string_view t) { tokens.emplace_back(t); });
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }
  std::vector<std::string> kept;
  for (auto& [token, count] : df) {
    if (count >= min_df) kept.push_back(token);
  }
  if (kept.empty()) throw InputError("vocabulary is empty: no trainable features");
  std::sort(kept.begin(), kept.end());
  return Vocabulary(std::move(kept));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> extract_indexed(
    std::string_view surname, const NGramConfig& config, const Vocabulary& vocab) {
  std::vector<std::uint32_t> hits;
  for_each_ngram(surname, config, [&](std::string_view token) {
    const std::size_t i = vocab.index_of(token);
    if (i < vocab.size()) hits.push_back(static_cast<std::uint32_t>(i));
  });
  std::sort(hits.begin(), hits.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t h : hits) {
    if (!out.empty() && out.back().first == h) {
      ++out.back().second;
    } else {
      out.emplace_back(h, 1);
    }
  }
  return out;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const auto& t : vocab.tokens()) out << t << '\n';
}

Vocabulary read_vocabulary(std::istream& in, const std::string& source) {
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw InputError(source, line_no, "empty vocabulary token");
    tokens.push_back(line);
  }
  try {
    return Vocabulary(std::move(tokens));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

}  // namespace onoma::features
