#include "onoma/typology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "onoma/error.hpp"
#include "onoma/io.hpp"

namespace onoma::typology {

CountryFeatureMatrix build_country_matrix(std::span<const corpus::CoreName> core_names,
                                          const features::NGramConfig& config,
                                          std::size_t min_core_names) {
  config.validate();
  std::map<std::string, std::vector<const corpus::CoreName*>> by_country;
  for (const auto& n : core_names) by_country[n.assigned_country].push_back(&n);

  CountryFeatureMatrix m;
  std::vector<std::vector<const corpus::CoreName*>> members;
  for (auto& [country, names] : by_country) {
    if (names.size() < min_core_names) continue;
    m.countries.push_back(country);
    m.core_name_counts.push_back(names.size());
    members.push_back(std::move(names));
  }
  if (m.countries.size() < 2) {
    throw InputError("country matrix needs at least 2 countries with >= " +
                     std::to_string(min_core_names) + " core names, found " +
                     std::to_string(m.countries.size()));
  }

  std::vector<std::unordered_map<std::string, std::size_t>> counts(m.countries.size());
  const auto n_rows = static_cast<std::ptrdiff_t>(m.countries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < n_rows; ++r) {
    auto& row = counts[static_cast<std::size_t>(r)];
    for (const auto* name : members[static_cast<std::size_t>(r)]) {
      features::for_each_ngram(name->surname, config,
                               [&](std::string_view t) { ++row[std::string(t)]; });
    }
  }

  std::set<std::string> columns;
  for (const auto& row : counts) {
    for (const auto& [token, c] : row) columns.insert(token);
  }
  m.columns.assign(columns.begin(), columns.end());
  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t c = 0; c < m.columns.size(); ++c) column_index.emplace(m.columns[c], c);

  m.cells.assign(m.rows() * m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t total = 0;
    for (const auto& [token, c] : counts[r]) total += c;
    if (total == 0) throw InputError("country " + m.countries[r] + " yields no n-grams");
    for (const auto& [token, c] : counts[r]) {
      m.cells[r * m.cols() + column_index.at(token)] =
          static_cast<double>(c) / static_cast<double>(total);
    }
  }
  return m;
}

cluster::Dendrogram ward_cluster(const CountryFeatureMatrix& matrix) {
  if (matrix.rows() < 2) throw InputError("Ward clustering needs at least 2 rows");
  for (double v : matrix.cells) {
    if (!std::isfinite(v)) throw InputError("country matrix has non-finite cells");
  }
  const auto d = cluster::euclidean_distances(matrix.cells, matrix.rows(), matrix.cols());
  return cluster::agglomerate(d, cluster::Linkage::ward, matrix.countries);
}

std::vector<Override> read_overrides(std::istream& in, const std::string& source) {
  std::vector<Override> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto f = text::split(line, '\t');
    if (f[0] == "REASSIGN" && f.size() == 3 && !f[1].empty() && !f[2].empty()) {
      out.push_back({Override::Kind::reassign, std::string(f[1]), std::string(f[2])});
    } else if (f[0] == "DELETE" && f.size() == 2 && !f[1].empty()) {
      out.push_back({Override::Kind::remove, std::string(f[1]), {}});
    } else {
      throw InputError(source, line_no,
                       "expected `REASSIGN<TAB>country<TAB>region` or `DELETE<TAB>country`");
    }
  }
  return out;
}

std::vector<Override> published_overrides() {
  using K = Override::Kind;
  return {
      {K::reassign, "PH", "Asian"}, {K::reassign, "JP", "Asian"},
      {K::reassign, "ID", "Asian"}, {K::reassign, "ET", "African"},
      {K::remove, "PG", {}},        {K::remove, "MG", {}},
      {K::remove, "JM", {}},        {K::remove, "TD", {}},
      {K::remove, "AM", {}},
  };
}

const std::vector<std::string>& published_region_labels() {
  static const std::vector<std::string> labels{
      "African", "Arabian", "Asian", "CS-European", "Indian", "N-European", "Slavic"};
  return labels;
}

const std::map<std::string, std::string>& published_anchors() {
  static const std::map<std::string, std::string> anchors{
      {"African", "NG"},     {"Arabian", "SA"},    {"Asian", "CN"},
      {"CS-European", "IT"}, {"Indian", "IN"},     {"N-European", "GB"},
      {"Slavic", "RU"},
  };
  return anchors;
}

RegionTypology cut_dendrogram(const cluster::Dendrogram& dendrogram, std::size_t k,
                              std::span<const Override> overrides,
                              const NamingOptions& naming) {
  const std::size_t n = dendrogram.leaf_count();
  if (k < 1 || k > n) {
    throw ConfigError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto cluster_of = cluster::cut(dendrogram, k);

  std::map<std::string, std::size_t> leaf_index;
  for (std::size_t i = 0; i < n; ++i) leaf_index.emplace(dendrogram.leaves[i], i);

  const auto& anchors = (naming.anchors.empty() && naming.published_defaults && k == 7)
                            ? published_anchors()
                            : naming.anchors;
  std::vector<std::string> name(k);
  for (const auto& [label, country] : anchors) {
    auto it = leaf_index.find(country);
    if (it == leaf_index.end()) {
      log::info("region anchor " + label + " -> " + country + " not among clustered countries");
      continue;
    }
    std::string& slot = name[cluster_of[it->second]];
    if (!slot.empty()) {
      log::warn("region anchors " + slot + " and " + label + " fall in the same cluster; keeping " +
                slot);
      continue;
    }
    slot = label;
  }

  std::set<std::string> used(name.begin(), name.end());
  for (std::size_t c = 0; c < k; ++c) {
    if (!name[c].empty()) continue;
    // Largest member by weight; ties go to the lowest country code.
    std::string best;
    std::size_t best_weight = 0;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
      if (cluster_of[leaf] != c) continue;
      const auto& country = dendrogram.leaves[leaf];
      const auto w_it = naming.weights.find(country);
      const std::size_t w = w_it == naming.weights.end() ? 0 : w_it->second;
      if (best.empty() || w > best_weight || (w == best_weight && country < best)) {
        best = country;
        best_weight = w;
      }
    }
    std::string label = "cluster-" + best;
    while (used.count(label) > 0) label += "'";
    used.insert(label);
    name[c] = std::move(label);
  }

  RegionTypology t;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    t.assignment[dendrogram.leaves[leaf]] = name[cluster_of[leaf]];
  }
  std::set<std::string> regions(name.begin(), name.end());

  for (const auto& o : overrides) {
    auto it = t.assignment.find(o.country);
    if (it == t.assignment.end()) {
      throw ConfigError("override names unknown country '" + o.country + "'");
    }
    if (o.kind == Override::Kind::remove) {
      it->second = std::nullopt;
    } else {
      if (regions.count(o.region) == 0) {
        throw ConfigError("override names unknown region '" + o.region + "'");
      }
      it->second = o.region;
    }
    t.overrides.push_back(o);
  }

  std::set<std::string> populated;
  for (const auto& [country, region] : t.assignment) {
    if (region) populated.insert(*region);
  }
  for (const auto& r : regions) {
    if (populated.count(r) == 0) {
      throw ConfigError("overrides leave region '" + r + "' without countries");
    }
  }
  t.regions.assign(regions.begin(), regions.end());
  return t;
}

Relabeled relabel(std::span<const corpus::CoreName> core_names,
                  const RegionTypology& typology) {
  std::set<std::string> missing;
  for (const auto& n : core_names) {
    if (!typology.covers(n.assigned_country)) missing.insert(n.assigned_country);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& c : missing) list += (list.empty() ? "" : ", ") + c;
    throw InputError("typology does not cover core-name countries: " + list);
  }
  Relabeled out;
  for (const auto& r : typology.regions) out.per_region[r] = 0;
  for (const auto& n : core_names) {
    const auto& region = typology.assignment.at(n.assigned_country);
    if (!region) {
      ++out.dropped;
      continue;
    }
    out.names.push_back({n.surname, *region});
    ++out.per_region[*region];
  }
  return out;
}

void write_typology(std::ostream& out, const RegionTypology& typology) {
  for (const auto& [country, region] : typology.assignment) {
    out << country << '\t' << (region ? *region : std::string(kDeleted)) << '\n';
  }
}

RegionTypology read_typology(std::istream& in, const std::string& source) {
  RegionTypology t;
  std::set<std::string> regions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto f = text::split(line, '\t');
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw InputError(source, line_no, "expected `country<TAB>region`");
    }
    std::optional<std::string> region;
    if (f[1] != kDeleted) {
      region = std::string(f[1]);
      regions.insert(*region);
    }
    if (!t.assignment.emplace(std::string(f[0]), region).second) {
      throw InputError(source, line_no, "duplicate country '" + std::string(f[0]) + "'");
    }
  }
  t.regions.assign(regions.begin(), regions.end());
  return t;
}

void write_labeled(std::ostream& out, std::span<const LabeledName> names) {
  for (const auto& n : names) out << n.surname << '\t' << n.region << '\n';
}

std::vector<LabeledName> read_labeled(std::istream& in, const std::string& source) {
  std::vector<LabeledName> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto f = text::split(line, '\t');
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw InputError(source, line_no, "expected `surname<TAB>region`");
    }
    out.push_back({std::string(f[0]), std::string(f[1])});
  }
  return out;
}

}  // namespace onoma::typology
