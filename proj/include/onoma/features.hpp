#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace onoma::features {

struct NGramConfig {
  std::vector<int> n_values{2, 3};
  bool pad_boundaries = true;
  std::string start_marker = "^";
  std::string end_marker = "$";

  /// Throws ConfigError when n_values is empty or outside [1, 8], or when the
  /// markers are not single, distinct, non-space code points.
  void validate() const;
};

/// n-gram token -> multiplicity, in token order.
using FeatureVector = std::map<std::string, std::uint32_t>;

/// Character n-grams of a normalized surname. Each space-separated word is
/// padded and decomposed independently. Throws InputError when the surname
/// contains a boundary marker.
FeatureVector extract(std::string_view surname, const NGramConfig& config);

/// Calls `sink(token)` once per n-gram occurrence, without building a map.
template <typename Sink>
void for_each_ngram(std::string_view surname, const NGramConfig& config, Sink&& sink);

/// Sorted token list; the position of a token is its feature index.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> sorted_tokens);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  /// Index of a token, or size() when absent.
  std::size_t index_of(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Tokens occurring in at least `min_df` distinct surnames, sorted.
/// Throws InputError when the corpus is empty or no token survives.
Vocabulary build_vocabulary(std::span<const std::string> corpus, const NGramConfig& config,
                            std::size_t min_df = 1);

/// (feature index, count) pairs for in-vocabulary tokens, sorted by index.
/// Out-of-vocabulary n-grams are dropped.
std::vector<std::pair<std::uint32_t, std::uint32_t>> extract_indexed(
    std::string_view surname, const NGramConfig& config, const Vocabulary& vocab);

void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in, const std::string& source);

// ---------------------------------------------------------------------------

namespace detail {
std::vector<std::size_t> offsets(std::string_view s);
void check_markers(std::string_view surname, const NGramConfig& config);
}  // namespace detail

template <typename Sink>
void for_each_ngram(std::string_view surname, const NGramConfig& config, Sink&& sink) {
  detail::check_markers(surname, config);
  std::string padded;
  std::size_t word_start = 0;
  while (word_start <= surname.size()) {
    std::size_t word_end = surname.find(' ', word_start);
    if (word_end == std::string_view::npos) word_end = surname.size();
    const std::string_view word = surname.substr(word_start, word_end - word_start);
    if (!word.empty()) {
      padded.clear();
      if (config.pad_boundaries) padded += config.start_marker;
      padded += word;
      if (config.pad_boundaries) padded += config.end_marker;
      const auto cp = detail::offsets(padded);
      const std::size_t length = cp.size() - 1;
      for (int n : config.n_values) {
        const auto un = static_cast<std::size_t>(n);
        if (length < un) continue;
        for (std::size_t i = 0; i + un <= length; ++i) {
          sink(std::string_view(padded).substr(cp[i], cp[i + un] - cp[i]));
        }
      }
    }
    word_start = word_end + 1;
  }
}

}  // namespace onoma::features
