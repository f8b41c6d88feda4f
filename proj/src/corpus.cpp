#include "onoma/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "onoma/error.hpp"
#include "onoma/io.hpp"

namespace onoma::corpus {

void OccurrenceTable::Builder::add(std::string surname, std::string country,
                                   std::uint64_t count) {
  if (count == 0) throw InputError("occurrence count must be positive");
  if (surname.empty()) throw InputError("empty surname");
  pending_.push_back({std::move(surname), std::move(country), count});
}

OccurrenceTable OccurrenceTable::Builder::build() && {
  std::sort(pending_.begin(), pending_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.surname, a.country) < std::tie(b.surname, b.country);
  });

  OccurrenceTable t;
  std::set<std::string> countries;
  for (const auto& r : pending_) countries.insert(r.country);
  t.countries_.assign(countries.begin(), countries.end());
  t.totals_.assign(t.countries_.size(), 0);

  for (std::size_t i = 0; i < pending_.size();) {
    const std::string& surname = pending_[i].surname;
    t.surnames_.push_back(surname);
    while (i < pending_.size() && pending_[i].surname == surname) {
      const std::string& country = pending_[i].country;
      std::uint64_t merged = 0;
      for (; i < pending_.size() && pending_[i].surname == surname &&
             pending_[i].country == country;
           ++i) {
        merged += pending_[i].count;
      }
      const auto c = static_cast<std::uint32_t>(
          std::lower_bound(t.countries_.begin(), t.countries_.end(), country) -
          t.countries_.begin());
      t.cells_.push_back({c, merged});
      t.totals_[c] += merged;
    }
    t.offsets_.push_back(t.cells_.size());
  }
  pending_.clear();
  return t;
}

std::optional<std::size_t> OccurrenceTable::find_surname(std::string_view surname) const {
  auto it = std::lower_bound(surnames_.begin(), surnames_.end(), surname);
  if (it == surnames_.end() || *it != surname) return std::nullopt;
  return static_cast<std::size_t>(it - surnames_.begin());
}

std::optional<std::size_t> OccurrenceTable::find_country(std::string_view country) const {
  auto it = std::lower_bound(countries_.begin(), countries_.end(), country);
  if (it == countries_.end() || *it != country) return std::nullopt;
  return static_cast<std::size_t>(it - countries_.begin());
}

std::uint64_t OccurrenceTable::count(std::string_view surname,
                                     std::string_view country) const {
  const auto s = find_surname(surname);
  const auto c = find_country(country);
  if (!s || !c) return 0;
  for (const Cell& cell : occurrences(*s)) {
    if (cell.country == *c) return cell.count;
  }
  return 0;
}

std::uint64_t OccurrenceTable::country_total(std::string_view country) const {
  const auto c = find_country(country);
  return c ? totals_[*c] : 0;
}

std::vector<OccurrenceRecord> OccurrenceTable::records() const {
  std::vector<OccurrenceRecord> out;
  out.reserve(cells_.size());
  for (std::size_t s = 0; s < surnames_.size(); ++s) {
    for (const Cell& cell : occurrences(s)) {
      out.push_back({surnames_[s], countries_[cell.country], cell.count});
    }
  }
  return out;
}

namespace {

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  }
  return out;
}

}  // namespace

IngestResult ingest(std::istream& in, const std::string& source,
                    const IngestOptions& opts) {
  const CountryRegistry& registry =
      opts.registry != nullptr ? *opts.registry : CountryRegistry::bundled();
  OccurrenceTable::Builder builder;
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && opts.header) continue;
    if (text::trim(line).empty()) continue;
    ++result.rows;

    const auto fields = text::split(line, '\t');
    if (fields.size() != 3) {
      throw InputError(source, line_no,
                       "expected 3 tab-separated fields, got " +
                           std::to_string(fields.size()));
    }
    std::string surname;
    try {
      surname = text::normalize_surname(fields[0], opts.normalize);
    } catch (const InputError& e) {
      throw InputError(source, line_no, e.what());
    }
    if (surname.empty()) throw InputError(source, line_no, "empty surname");

    const auto count_field = text::trim(fields[2]);
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(
        count_field.data(), count_field.data() + count_field.size(), count);
    if (ec != std::errc() || ptr != count_field.data() + count_field.size() ||
        count_field.empty()) {
      throw InputError(source, line_no,
                       "count is not a positive integer: '" + std::string(fields[2]) + "'");
    }
    if (count == 0) throw InputError(source, line_no, "count must be positive");

    std::string country = upper_ascii(text::trim(fields[1]));
    if (!registry.contains(country)) {
      if (opts.strict) {
        throw InputError(source, line_no, "unknown country code '" + country + "'");
      }
      log::warn(source + ":" + std::to_string(line_no) + ": unknown country code '" +
                country + "', row skipped");
      ++result.rejected;
      continue;
    }
    builder.add(std::move(surname), std::move(country), count);
  }
  result.table = std::move(builder).build();
  return result;
}

void write_table(std::ostream& out, const OccurrenceTable& table) {
  for (const auto& r : table.records()) {
    out << r.surname << '\t' << r.country << '\t' << r.count << '\n';
  }
}

double frequency(const OccurrenceTable& table, std::string_view surname,
                 std::string_view country) {
  const std::uint64_t total = table.country_total(country);
  if (total == 0) {
    throw InputError("frequency undefined: country '" + std::string(country) +
                     "' has no observations");
  }
  return static_cast<double>(table.count(surname, country)) / static_cast<double>(total);
}

double hhi(std::span<const double> shares) {
  if (shares.empty()) throw InputError("hhi: empty share vector");
  double sum = 0.0;
  double squares = 0.0;
  for (double s : shares) {
    if (!(s >= 0.0)) throw InputError("hhi: shares must be non-negative");
    sum += s;
    squares += s * s;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError("hhi: shares sum to " + io::format_exact(sum) + ", expected 1");
  }
  return squares;
}

namespace {

double basis_value(const OccurrenceTable& table, const OccurrenceTable::Cell& cell,
                   ShareBasis basis) {
  if (basis == ShareBasis::count) return static_cast<double>(cell.count);
  return static_cast<double>(cell.count) /
         static_cast<double>(table.country_totals()[cell.country]);
}

}  // namespace

std::vector<CountryShare> core_shares(const OccurrenceTable& table,
                                      std::string_view surname, ShareBasis basis) {
  const auto s = table.find_surname(surname);
  if (!s) throw InputError("surname has no occurrences: '" + std::string(surname) + "'");
  const auto cells = table.occurrences(*s);
  double total = 0.0;
  for (const auto& cell : cells) total += basis_value(table, cell, basis);
  std::vector<CountryShare> shares;
  shares.reserve(cells.size());
  for (const auto& cell : cells) {
    shares.push_back({table.countries()[cell.country],
                      basis_value(table, cell, basis) / total});
  }
  return shares;
}

SurnameVerdict judge_surname(const OccurrenceTable& table, std::size_t surname_index,
                             const FilterOptions& opts) {
  const auto cells = table.occurrences(surname_index);
  SurnameVerdict v;
  double total = 0.0;
  for (const auto& cell : cells) total += basis_value(table, cell, opts.basis);
  for (const auto& cell : cells) {
    const double share = basis_value(table, cell, opts.basis) / total;
    v.hhi += share * share;
    const double f = basis_value(table, cell, ShareBasis::frequency);
    if (f > v.max_frequency) {
      v.max_frequency = f;
      v.argmax_country = cell.country;
      v.tied = false;
    } else if (f == v.max_frequency) {
      v.tied = true;
    }
  }
  v.accepted = v.hhi >= opts.hhi_min && v.max_frequency >= opts.freq_min;
  return v;
}

namespace {

std::vector<CoreName> collect(const OccurrenceTable& table,
                              const std::vector<SurnameVerdict>& verdicts) {
  std::vector<CoreName> out;
  std::size_t ties = 0;
  for (std::size_t s = 0; s < verdicts.size(); ++s) {
    const auto& v = verdicts[s];
    if (!v.accepted) continue;
    if (v.tied) ++ties;
    out.push_back({table.surnames()[s], table.countries()[v.argmax_country], v.hhi,
                   v.max_frequency});
  }
  if (ties > 0) {
    log::info("filter_core_names: " + std::to_string(ties) +
              " accepted surname(s) had tied maximal frequencies; lowest country code kept");
  }
  return out;
}

}  // namespace

std::vector<CoreName> filter_core_names(const OccurrenceTable& table,
                                        const FilterOptions& opts) {
  const auto n = static_cast<std::ptrdiff_t>(table.surnames().size());
  std::vector<SurnameVerdict> verdicts(table.surnames().size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    verdicts[static_cast<std::size_t>(s)] =
        judge_surname(table, static_cast<std::size_t>(s), opts);
  }
  return collect(table, verdicts);
}

std::vector<CoreName> filter_core_names_serial(const OccurrenceTable& table,
                                               const FilterOptions& opts) {
  std::vector<SurnameVerdict> verdicts;
  verdicts.reserve(table.surnames().size());
  for (std::size_t s = 0; s < table.surnames().size(); ++s) {
    verdicts.push_back(judge_surname(table, s, opts));
  }
  return collect(table, verdicts);
}

void write_core_names(std::ostream& out, const std::vector<CoreName>& names) {
  for (const auto& n : names) {
    out << n.surname << '\t' << n.assigned_country << '\t' << io::format_sig(n.hhi, 6)
        << '\t' << io::format_sig(n.max_frequency, 6) << '\n';
  }
}

std::vector<CoreName> read_core_names(std::istream& in, const std::string& source) {
  std::vector<CoreName> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 4) {
      throw InputError(source, line_no,
                       "expected `surname<TAB>country<TAB>hhi<TAB>max_frequency`");
    }
    CoreName n;
    n.surname = std::string(fields[0]);
    n.assigned_country = std::string(fields[1]);
    try {
      std::size_t used = 0;
      n.hhi = std::stod(std::string(fields[2]), &used);
      n.max_frequency = std::stod(std::string(fields[3]));
    } catch (const std::exception&) {
      throw InputError(source, line_no, "non-numeric hhi or frequency");
    }
    if (n.surname.empty() || n.assigned_country.empty()) {
      throw InputError(source, line_no, "empty surname or country");
    }
    names.push_back(std::move(n));
  }
  return names;
}

Gazetteer Gazetteer::from_registry(const CountryRegistry& registry) {
  Gazetteer g;
  for (const auto& c : registry.countries()) g.add(c.name, c.code);
  return g;
}

Gazetteer Gazetteer::read_tsv(std::istream& in, const std::string& source) {
  Gazetteer g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2 || text::trim(fields[0]).empty() ||
        text::trim(fields[1]).empty()) {
      throw InputError(source, line_no, "expected `alias<TAB>country_code`");
    }
    g.add(text::trim(fields[0]), upper_ascii(text::trim(fields[1])));
  }
  return g;
}

void Gazetteer::add(std::string_view alias, std::string country_code) {
  entries_.push_back({text::fold_case(alias), std::move(country_code)});
}

std::optional<std::string> tag_affiliation_country(std::string_view affiliation,
                                                   const Gazetteer& gazetteer) {
  const std::string folded = text::fold_case(affiliation);
  std::optional<std::string> found;
  for (const auto& e : gazetteer.entries()) {
    if (!text::contains_whole_word(folded, e.alias)) continue;
    if (found && *found != e.country) return std::nullopt;
    found = e.country;
  }
  return found;
}

}  // namespace onoma::corpus
