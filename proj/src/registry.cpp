#include "onoma/registry.hpp"

#include <algorithm>
#include <string>

#include "onoma/error.hpp"
#include "onoma/text.hpp"

namespace onoma {

CountryRegistry::CountryRegistry(std::vector<Country> countries)
    : countries_(std::move(countries)) {
  std::sort(countries_.begin(), countries_.end(),
            [](const Country& a, const Country& b) { return a.code < b.code; });
  auto dup = std::adjacent_find(
      countries_.begin(), countries_.end(),
      [](const Country& a, const Country& b) { return a.code == b.code; });
  if (dup != countries_.end()) {
    throw InputError("duplicate country code in registry: " + dup->code);
  }
}

const CountryRegistry& CountryRegistry::bundled() {
  static const CountryRegistry registry(std::vector<Country>{
      {"AE", "United Arab Emirates"},
      {"AF", "Afghanistan"},
      {"AL", "Albania"},
      {"AM", "Armenia"},
      {"AO", "Angola"},
      {"AR", "Argentina"},
      {"AT", "Austria"},
      {"AU", "Australia"},
      {"AZ", "Azerbaijan"},
      {"BA", "Bosnia and Herzegovina"},
      {"BD", "Bangladesh"},
      {"BE", "Belgium"},
      {"BF", "Burkina Faso"},
      {"BG", "Bulgaria"},
      {"BH", "Bahrain"},
      {"BI", "Burundi"},
      {"BJ", "Benin"},
      {"BN", "Brunei"},
      {"BO", "Bolivia"},
      {"BR", "Brazil"},
      {"BS", "Bahamas"},
      {"BT", "Bhutan"},
      {"BW", "Botswana"},
      {"BY", "Belarus"},
      {"BZ", "Belize"},
      {"CA", "Canada"},
      {"CD", "Democratic Republic of the Congo"},
      {"CF", "Central African Republic"},
      {"CG", "Republic of the Congo"},
      {"CH", "Switzerland"},
      {"CI", "Ivory Coast"},
      {"CL", "Chile"},
      {"CM", "Cameroon"},
      {"CN", "China"},
      {"CO", "Colombia"},
      {"CR", "Costa Rica"},
      {"CU", "Cuba"},
      {"CY", "Cyprus"},
      {"CZ", "Czechia"},
      {"DE", "Germany"},
      {"DJ", "Djibouti"},
      {"DK", "Denmark"},
      {"DO", "Dominican Republic"},
      {"DZ", "Algeria"},
      {"EC", "Ecuador"},
      {"EE", "Estonia"},
      {"EG", "Egypt"},
      {"EH", "Western Sahara"},
      {"ER", "Eritrea"},
      {"ES", "Spain"},
      {"ET", "Ethiopia"},
      {"FI", "Finland"},
      {"FJ", "Fiji"},
      {"FK", "Falkland Islands"},
      {"FR", "France"},
      {"GA", "Gabon"},
      {"GB", "United Kingdom"},
      {"GE", "Georgia"},
      {"GH", "Ghana"},
      {"GL", "Greenland"},
      {"GM", "Gambia"},
      {"GN", "Guinea"},
      {"GQ", "Equatorial Guinea"},
      {"GR", "Greece"},
      {"GT", "Guatemala"},
      {"GW", "Guinea-Bissau"},
      {"GY", "Guyana"},
      {"HN", "Honduras"},
      {"HR", "Croatia"},
      {"HT", "Haiti"},
      {"HU", "Hungary"},
      {"ID", "Indonesia"},
      {"IE", "Ireland"},
      {"IL", "Israel"},
      {"IN", "India"},
      {"IQ", "Iraq"},
      {"IR", "Iran"},
      {"IS", "Iceland"},
      {"IT", "Italy"},
      {"JM", "Jamaica"},
      {"JO", "Jordan"},
      {"JP", "Japan"},
      {"KE", "Kenya"},
      {"KG", "Kyrgyzstan"},
      {"KH", "Cambodia"},
      {"KP", "North Korea"},
      {"KR", "South Korea"},
      {"KW", "Kuwait"},
      {"KZ", "Kazakhstan"},
      {"LA", "Laos"},
      {"LB", "Lebanon"},
      {"LK", "Sri Lanka"},
      {"LR", "Liberia"},
      {"LS", "Lesotho"},
      {"LT", "Lithuania"},
      {"LU", "Luxembourg"},
      {"LV", "Latvia"},
      {"LY", "Libya"},
      {"MA", "Morocco"},
      {"MD", "Moldova"},
      {"ME", "Montenegro"},
      {"MG", "Madagascar"},
      {"MK", "North Macedonia"},
      {"ML", "Mali"},
      {"MM", "Myanmar"},
      {"MN", "Mongolia"},
      {"MR", "Mauritania"},
      {"MU", "Mauritius"},
      {"MW", "Malawi"},
      {"MX", "Mexico"},
      {"MY", "Malaysia"},
      {"MZ", "Mozambique"},
      {"NA", "Namibia"},
      {"NC", "New Caledonia"},
      {"NE", "Niger"},
      {"NG", "Nigeria"},
      {"NI", "Nicaragua"},
      {"NL", "Netherlands"},
      {"NO", "Norway"},
      {"NP", "Nepal"},
      {"NZ", "New Zealand"},
      {"OM", "Oman"},
      {"PA", "Panama"},
      {"PE", "Peru"},
      {"PG", "Papua New Guinea"},
      {"PH", "Philippines"},
      {"PK", "Pakistan"},
      {"PL", "Poland"},
      {"PR", "Puerto Rico"},
      {"PS", "Palestine"},
      {"PT", "Portugal"},
      {"PY", "Paraguay"},
      {"QA", "Qatar"},
      {"RO", "Romania"},
      {"RS", "Serbia"},
      {"RU", "Russia"},
      {"RW", "Rwanda"},
      {"SA", "Saudi Arabia"},
      {"SB", "Solomon Islands"},
      {"SD", "Sudan"},
      {"SE", "Sweden"},
      {"SG", "Singapore"},
      {"SI", "Slovenia"},
      {"SK", "Slovakia"},
      {"SL", "Sierra Leone"},
      {"SN", "Senegal"},
      {"SO", "Somalia"},
      {"SR", "Suriname"},
      {"SS", "South Sudan"},
      {"SV", "El Salvador"},
      {"SY", "Syria"},
      {"SZ", "Eswatini"},
      {"TD", "Chad"},
      {"TG", "Togo"},
      {"TH", "Thailand"},
      {"TJ", "Tajikistan"},
      {"TL", "Timor-Leste"},
      {"TM", "Turkmenistan"},
      {"TN", "Tunisia"},
      {"TR", "Turkey"},
      {"TT", "Trinidad and Tobago"},
      {"TW", "Taiwan"},
      {"TZ", "Tanzania"},
      {"UA", "Ukraine"},
      {"UG", "Uganda"},
      {"US", "United States"},
      {"UY", "Uruguay"},
      {"UZ", "Uzbekistan"},
      {"VE", "Venezuela"},
      {"VN", "Vietnam"},
      {"VU", "Vanuatu"},
      {"XK", "Kosovo"},
      {"YE", "Yemen"},
      {"ZA", "South Africa"},
      {"ZM", "Zambia"},
      {"ZW", "Zimbabwe"}
  });
  return registry;
}

CountryRegistry CountryRegistry::read_tsv(std::istream& in, const std::string& source) {
  std::vector<Country> countries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2 || text::trim(fields[0]).empty()) {
      throw InputError(source, line_no, "expected `code<TAB>name`");
    }
    countries.push_back({std::string(text::trim(fields[0])), std::string(text::trim(fields[1]))});
  }
  if (countries.empty()) throw InputError(source + ": empty country registry");
  return CountryRegistry(std::move(countries));
}

bool CountryRegistry::contains(std::string_view code) const {
  return name_of(code).has_value();
}

std::optional<std::string_view> CountryRegistry::name_of(std::string_view code) const {
  auto it = std::lower_bound(
      countries_.begin(), countries_.end(), code,
      [](const Country& c, std::string_view key) { return c.code < key; });
  if (it == countries_.end() || it->code != code) return std::nullopt;
  return it->name;
}

}  // namespace onoma
