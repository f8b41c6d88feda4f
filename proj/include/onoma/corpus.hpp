#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "onoma/registry.hpp"
#include "onoma/text.hpp"

namespace onoma::corpus {

struct OccurrenceRecord {
  std::string surname;
  std::string country;
  std::uint64_t count = 0;
};

/// Merged (surname, country) -> count observations with per-country totals.
/// Immutable once built; surnames and countries are stored in lexicographic
/// order so every derived result is independent of input row order.
class OccurrenceTable {
 public:
  struct Cell {
    std::uint32_t country = 0;  // index into countries()
    std::uint64_t count = 0;
  };

  /// Accumulates records; duplicate (surname, country) pairs are summed.
  class Builder {
   public:
    void add(std::string surname, std::string country, std::uint64_t count);
    OccurrenceTable build() &&;

   private:
    std::vector<OccurrenceRecord> pending_;
  };

  OccurrenceTable() = default;

  const std::vector<std::string>& surnames() const { return surnames_; }
  const std::vector<std::string>& countries() const { return countries_; }
  const std::vector<std::uint64_t>& country_totals() const { return totals_; }

  std::span<const Cell> occurrences(std::size_t surname_index) const {
    return {cells_.data() + offsets_[surname_index],
            offsets_[surname_index + 1] - offsets_[surname_index]};
  }

  std::optional<std::size_t> find_surname(std::string_view surname) const;
  std::optional<std::size_t> find_country(std::string_view country) const;

  std::uint64_t count(std::string_view surname, std::string_view country) const;
  /// 0 when the country has no observations.
  std::uint64_t country_total(std::string_view country) const;

  std::size_t record_count() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  /// Records in (surname, country) order.
  std::vector<OccurrenceRecord> records() const;

 private:
  std::vector<std::string> surnames_;
  std::vector<std::string> countries_;
  std::vector<std::uint64_t> totals_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Cell> cells_;
};

struct IngestOptions {
  bool header = false;
  /// Unknown country codes are a hard error instead of a skipped row.
  bool strict = false;
  text::NormalizeOptions normalize;
  const CountryRegistry* registry = nullptr;  // nullptr: bundled registry
};

struct IngestResult {
  OccurrenceTable table;
  std::size_t rows = 0;
  std::size_t rejected = 0;
};

/// Reads `surname<TAB>country<TAB>count` rows. Malformed rows throw
/// InputError carrying the line number.
IngestResult ingest(std::istream& in, const std::string& source,
                    const IngestOptions& opts = {});

/// Writes the merged table back in the input TSV format.
void write_table(std::ostream& out, const OccurrenceTable& table);

/// count(surname, country) / total(country).
double frequency(const OccurrenceTable& table, std::string_view surname,
                 std::string_view country);

/// Sum of squared shares. Shares must be non-negative and sum to 1 (1e-9).
double hhi(std::span<const double> shares);

/// What the concentration index is computed over.
enum class ShareBasis {
  frequency,  // per-country normalized frequencies (default)
  count,      // raw occurrence counts
};

struct CountryShare {
  std::string country;
  double share = 0.0;
};

/// Shares of one surname across the countries it occurs in, country order.
std::vector<CountryShare> core_shares(const OccurrenceTable& table,
                                      std::string_view surname,
                                      ShareBasis basis = ShareBasis::frequency);

struct CoreName {
  std::string surname;
  std::string assigned_country;
  double hhi = 0.0;
  double max_frequency = 0.0;
};

struct FilterOptions {
  double hhi_min = 0.8;
  /// Fraction, not percent: 1e-6 is 0.0001 %.
  double freq_min = 1e-6;
  ShareBasis basis = ShareBasis::frequency;
};

/// Per-surname outcome of the core-name test, computed independently for
/// every surname (the unit of parallel work).
struct SurnameVerdict {
  double hhi = 0.0;
  double max_frequency = 0.0;
  std::uint32_t argmax_country = 0;
  bool tied = false;
  bool accepted = false;
};

SurnameVerdict judge_surname(const OccurrenceTable& table, std::size_t surname_index,
                             const FilterOptions& opts);

/// Core names sorted by surname. Runs the per-surname test in parallel.
std::vector<CoreName> filter_core_names(const OccurrenceTable& table,
                                        const FilterOptions& opts = {});

/// Single-threaded reference for filter_core_names.
std::vector<CoreName> filter_core_names_serial(const OccurrenceTable& table,
                                               const FilterOptions& opts = {});

void write_core_names(std::ostream& out, const std::vector<CoreName>& names);
std::vector<CoreName> read_core_names(std::istream& in, const std::string& source);

/// Country-name aliases used to geolocate free-text affiliations.
class Gazetteer {
 public:
  Gazetteer() = default;

  /// One alias per registry entry (its display name).
  static Gazetteer from_registry(const CountryRegistry& registry);

  /// Reads `alias<TAB>country_code` rows.
  static Gazetteer read_tsv(std::istream& in, const std::string& source);

  void add(std::string_view alias, std::string country_code);

  struct Entry {
    std::string alias;  // case-folded
    std::string country;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

/// The unique country whose alias occurs as a whole word in the affiliation,
/// or nothing when zero or several distinct countries match.
std::optional<std::string> tag_affiliation_country(std::string_view affiliation,
                                                   const Gazetteer& gazetteer);

}  // namespace onoma::corpus
