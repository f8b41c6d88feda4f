#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace onoma {

struct Country {
  std::string code;
  std::string name;
};

/// Set of admissible country codes, each with an English display name.
/// Codes are kept sorted; lookups are by exact code.
class CountryRegistry {
 public:
  CountryRegistry() = default;
  explicit CountryRegistry(std::vector<Country> countries);

  /// The bundled 176-country list (ISO 3166-1 alpha-2 codes).
  static const CountryRegistry& bundled();

  /// Reads `code<TAB>name` rows; blank lines and `#` comments skipped.
  static CountryRegistry read_tsv(std::istream& in, const std::string& source);

  bool contains(std::string_view code) const;
  std::optional<std::string_view> name_of(std::string_view code) const;
  const std::vector<Country>& countries() const { return countries_; }
  std::size_t size() const { return countries_.size(); }

 private:
  std::vector<Country> countries_;
};

}  // namespace onoma
