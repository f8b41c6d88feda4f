#include "onoma/diversity.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "onoma/error.hpp"
#include "onoma/io.hpp"

namespace onoma::diversity {

OriginDistribution distribution(std::string dataset_name, std::span<const std::string> surnames,
                                const classifier::TrainedModel& model,
                                const correction::CorrectionOperator& op,
                                const text::NormalizeOptions& normalize) {
  if (op.regions != model.regions()) {
    throw InputError("correction operator regions do not match the model regions");
  }
  std::vector<std::string> normalized;
  normalized.reserve(surnames.size());
  for (const auto& s : surnames) {
    auto n = text::normalize_surname(s, normalize);
    if (!n.empty()) normalized.push_back(std::move(n));
  }
  if (normalized.empty()) {
    throw InputError("population '" + dataset_name + "' contains no surnames");
  }

  std::vector<bool> prior_only;
  const auto labels = classifier::classify_labels(model, normalized, &prior_only);

  OriginDistribution d;
  d.dataset_name = std::move(dataset_name);
  d.regions = model.regions();
  d.guessed.assign(d.regions.size(), 0.0);
  for (std::size_t l : labels) d.guessed[l] += 1.0;
  d.n_names = normalized.size();
  d.n_prior_only = static_cast<std::size_t>(std::count(prior_only.begin(), prior_only.end(), true));
  d.counts = correction::correct_counts(d.guessed, op);
  double total = 0.0;
  for (double c : d.counts) total += c;
  d.proportions.reserve(d.counts.size());
  for (double c : d.counts) d.proportions.push_back(c / total);
  return d;
}

RepresentationProfile representation_ratios(const OriginDistribution& target,
                                            const OriginDistribution& reference) {
  if (target.regions != reference.regions) {
    throw InputError("cannot compare '" + target.dataset_name + "' with '" +
                     reference.dataset_name + "': region sets differ");
  }
  RepresentationProfile p;
  p.dataset_name = target.dataset_name;
  p.regions = target.regions;
  for (std::size_t r = 0; r < target.regions.size(); ++r) {
    const double ref = reference.proportions[r];
    if (ref > 0.0) {
      p.ratios.emplace_back(target.proportions[r] / ref);
    } else {
      p.ratios.emplace_back(std::nullopt);
    }
  }
  return p;
}

double canberra(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("canberra: vectors differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw InputError("canberra: entries must be non-negative");
    const double denom = p[i] + q[i];
    if (denom > 0.0) d += std::abs(p[i] - q[i]) / denom;
  }
  return d;
}

std::vector<double> defined_ratios(const RepresentationProfile& profile) {
  std::vector<double> out;
  out.reserve(profile.ratios.size());
  for (const auto& r : profile.ratios) out.push_back(r.value_or(0.0));
  return out;
}

namespace {

cluster::Dendrogram canberra_tree(const std::vector<std::vector<double>>& vectors,
                                  std::vector<std::string> labels) {
  const std::size_t n = vectors.size();
  cluster::DistanceMatrix d{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = canberra(vectors[i], vectors[j]);
  }
  return cluster::agglomerate(d, cluster::Linkage::average, std::move(labels));
}

}  // namespace

ProfileOrdering order_profiles(std::vector<RepresentationProfile> profiles) {
  ProfileOrdering out;
  if (profiles.size() < 2) {
    out.profiles = std::move(profiles);
    return out;
  }
  std::sort(profiles.begin(), profiles.end(), [](const auto& a, const auto& b) {
    if (a.dataset_name != b.dataset_name) return a.dataset_name < b.dataset_name;
    return defined_ratios(a) < defined_ratios(b);
  });
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> labels;
  for (const auto& p : profiles) {
    vectors.push_back(defined_ratios(p));
    labels.push_back(p.dataset_name);
  }
  out.tree = canberra_tree(vectors, std::move(labels));
  for (std::size_t leaf : cluster::leaf_order(out.tree)) out.profiles.push_back(profiles[leaf]);
  return out;
}

std::vector<std::size_t> order_regions(std::span<const RepresentationProfile> profiles) {
  const std::size_t k = profiles.empty() ? 0 : profiles.front().regions.size();
  std::vector<std::size_t> identity(k);
  for (std::size_t r = 0; r < k; ++r) identity[r] = r;
  if (profiles.size() < 2 || k < 2) return identity;

  std::vector<const RepresentationProfile*> sorted;
  for (const auto& p : profiles) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    if (a->dataset_name != b->dataset_name) return a->dataset_name < b->dataset_name;
    return defined_ratios(*a) < defined_ratios(*b);
  });
  std::vector<std::vector<double>> columns(k);
  for (const auto* p : sorted) {
    const auto v = defined_ratios(*p);
    for (std::size_t r = 0; r < k; ++r) columns[r].push_back(v[r]);
  }
  return cluster::leaf_order(canberra_tree(columns, profiles.front().regions));
}

std::vector<std::string> small_count_warnings(const OriginDistribution& target,
                                              const OriginDistribution& reference) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < target.regions.size(); ++r) {
    const double expected = static_cast<double>(target.n_names) * reference.proportions[r];
    if (expected < 5.0) out.push_back(target.regions[r]);
  }
  return out;
}

namespace {

nlohmann::ordered_json distribution_object(const OriginDistribution& d) {
  nlohmann::ordered_json j;
  j["dataset"] = d.dataset_name;
  j["regions"] = d.regions;
  j["n_names"] = d.n_names;
  j["n_prior_only"] = d.n_prior_only;
  j["guessed"] = d.guessed;
  j["corrected_counts"] = d.counts;
  j["proportions"] = d.proportions;
  return j;
}

}  // namespace

std::string distribution_json(const OriginDistribution& d) {
  return distribution_object(d).dump(2) + "\n";
}

ReportFiles emit_report(const ProfileOrdering& ordering,
                        std::span<const OriginDistribution> distributions,
                        const OriginDistribution& reference,
                        const ReportProvenance& provenance,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw InputError("cannot create report directory " + dir.string());
  }

  const auto region_order = order_regions(ordering.profiles);
  const auto& regions = reference.regions;

  std::string ratios = "dataset";
  for (std::size_t r : region_order) ratios += "," + regions[r];
  ratios += '\n';
  for (const auto& p : ordering.profiles) {
    ratios += p.dataset_name;
    for (std::size_t r : region_order) {
      ratios += ",";
      ratios += p.ratios[r] ? io::format_exact(*p.ratios[r]) : std::string("NA");
    }
    ratios += '\n';
  }

  std::string dists = "dataset,n_names,n_prior_only";
  for (const auto& r : regions) dists += ",guessed:" + r;
  for (const auto& r : regions) dists += ",corrected:" + r;
  for (const auto& r : regions) dists += ",proportion:" + r;
  dists += '\n';
  for (const auto& d : distributions) {
    dists += d.dataset_name + "," + std::to_string(d.n_names) + "," +
             std::to_string(d.n_prior_only);
    for (double v : d.guessed) dists += "," + io::format_exact(v);
    for (double v : d.counts) dists += "," + io::format_exact(v);
    for (double v : d.proportions) dists += "," + io::format_exact(v);
    dists += '\n';
  }

  nlohmann::ordered_json j;
  j["metric"] = "canberra";
  j["linkage"] = "average";
  j["corrected"] = provenance.corrected;
  j["reference"] = provenance.reference_name;
  j["provenance"] = {{"model_sha256", provenance.model_sha256},
                     {"operator", provenance.operator_source},
                     {"config", nlohmann::ordered_json::parse(provenance.config_json)}};
  nlohmann::ordered_json order = nlohmann::ordered_json::array();
  for (std::size_t r : region_order) order.push_back(regions[r]);
  j["region_order"] = order;
  nlohmann::ordered_json profiles = nlohmann::ordered_json::array();
  for (const auto& p : ordering.profiles) {
    nlohmann::ordered_json pj;
    pj["dataset"] = p.dataset_name;
    nlohmann::ordered_json rj;
    for (std::size_t r = 0; r < p.regions.size(); ++r) {
      rj[p.regions[r]] = p.ratios[r] ? nlohmann::ordered_json(*p.ratios[r]) : nullptr;
    }
    pj["ratios"] = rj;
    for (const auto& d : distributions) {
      if (d.dataset_name == p.dataset_name) {
        pj["low_expected_count_regions"] = small_count_warnings(d, reference);
        break;
      }
    }
    profiles.push_back(pj);
  }
  j["profiles"] = profiles;
  nlohmann::ordered_json tree = nlohmann::ordered_json::array();
  for (const auto& m : ordering.tree.merges) {
    tree.push_back({m.node_a, m.node_b, m.height, m.new_node});
  }
  j["tree"] = {{"leaves", ordering.tree.leaves}, {"merges", tree}};
  nlohmann::ordered_json dj = nlohmann::ordered_json::array();
  for (const auto& d : distributions) dj.push_back(distribution_object(d));
  j["distributions"] = dj;

  ReportFiles files{dir / "ratios.csv", dir / "distributions.csv", dir / "report.json"};
  io::write_file(files.ratios_csv, ratios);
  io::write_file(files.distributions_csv, dists);
  io::write_file(files.bundle_json, j.dump(2) + "\n");
  return files;
}

}  // namespace onoma::diversity
