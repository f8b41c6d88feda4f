#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onoma/cluster.hpp"
#include "onoma/corpus.hpp"
#include "onoma/features.hpp"

namespace onoma::typology {

/// Countries x n-grams; each row holds the n-gram frequency distribution of
/// one country's core names and sums to 1.
struct CountryFeatureMatrix {
  std::vector<std::string> countries;
  std::vector<std::string> columns;
  std::vector<double> cells;  // row-major, countries.size() x columns.size()
  std::vector<std::size_t> core_name_counts;

  std::size_t rows() const { return countries.size(); }
  std::size_t cols() const { return columns.size(); }
  std::span<const double> row(std::size_t i) const {
    return {cells.data() + i * cols(), cols()};
  }
};

/// Throws InputError when fewer than two countries have `min_core_names`.
CountryFeatureMatrix build_country_matrix(std::span<const corpus::CoreName> core_names,
                                          const features::NGramConfig& config,
                                          std::size_t min_core_names = 20);

/// Ward linkage over Euclidean distances between matrix rows.
cluster::Dendrogram ward_cluster(const CountryFeatureMatrix& matrix);

struct Override {
  enum class Kind { reassign, remove };
  Kind kind = Kind::reassign;
  std::string country;
  std::string region;  // empty for remove
};

/// Rows `REASSIGN<TAB>country<TAB>region` or `DELETE<TAB>country`.
std::vector<Override> read_overrides(std::istream& in, const std::string& source);

/// The reassignments and deletions listed under the published world-region
/// dendrogram.
std::vector<Override> published_overrides();

/// African, Arabian, Asian, CS-European, Indian, N-European, Slavic.
const std::vector<std::string>& published_region_labels();

/// One representative country per published region label, used to name
/// clusters when k = 7 and no anchors are configured.
const std::map<std::string, std::string>& published_anchors();

inline constexpr std::string_view kDeleted = "DELETED";

struct RegionTypology {
  std::vector<std::string> regions;  // sorted, non-deleted labels
  std::map<std::string, std::optional<std::string>> assignment;  // nullopt: deleted
  std::vector<Override> overrides;

  bool covers(const std::string& country) const { return assignment.count(country) > 0; }
};

struct NamingOptions {
  /// region label -> country whose cluster receives that label.
  std::map<std::string, std::string> anchors;
  /// core-name count per country, used to pick the largest member when a
  /// cluster has no anchor.
  std::map<std::string, std::size_t> weights;
  /// Use published_anchors() when k == 7 and `anchors` is empty.
  bool published_defaults = true;
};

/// k clusters from the dendrogram, named, then overrides applied in order.
/// Throws ConfigError for unknown override countries or regions, or when an
/// override leaves a region empty.
RegionTypology cut_dendrogram(const cluster::Dendrogram& dendrogram, std::size_t k,
                              std::span<const Override> overrides,
                              const NamingOptions& naming = {});

struct LabeledName {
  std::string surname;
  std::string region;
};

struct Relabeled {
  std::vector<LabeledName> names;
  std::map<std::string, std::size_t> per_region;
  std::size_t dropped = 0;  // names of deleted countries
};

/// Throws InputError listing every core-name country the typology lacks.
Relabeled relabel(std::span<const corpus::CoreName> core_names,
                  const RegionTypology& typology);

void write_typology(std::ostream& out, const RegionTypology& typology);
RegionTypology read_typology(std::istream& in, const std::string& source);

/// `surname<TAB>region` rows.
void write_labeled(std::ostream& out, std::span<const LabeledName> names);
std::vector<LabeledName> read_labeled(std::istream& in, const std::string& source);

}  // namespace onoma::typology
