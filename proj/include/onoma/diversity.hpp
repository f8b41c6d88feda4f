#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onoma/classifier.hpp"
#include "onoma/cluster.hpp"
#include "onoma/correction.hpp"
#include "onoma/text.hpp"

namespace onoma::diversity {

/// Group-level origin composition of one population. Individual labels are
/// never retained.
struct OriginDistribution {
  std::string dataset_name;
  std::vector<std::string> regions;
  std::vector<double> guessed;      // raw classifier tallies
  std::vector<double> counts;       // after correction
  std::vector<double> proportions;  // counts / sum(counts)
  std::size_t n_names = 0;
  std::size_t n_prior_only = 0;
};

/// Normalizes and classifies every surname, tallies labels, and applies the
/// correction operator. Throws InputError for an empty list or when the
/// operator and model disagree on regions.
OriginDistribution distribution(std::string dataset_name, std::span<const std::string> surnames,
                                const classifier::TrainedModel& model,
                                const correction::CorrectionOperator& op,
                                const text::NormalizeOptions& normalize = {});

struct RepresentationProfile {
  std::string dataset_name;
  std::vector<std::string> regions;
  /// target / reference proportion; nullopt where the reference is 0.
  std::vector<std::optional<double>> ratios;
};

RepresentationProfile representation_ratios(const OriginDistribution& target,
                                            const OriginDistribution& reference);

/// sum |p_i - q_i| / (p_i + q_i), skipping coordinates where both are 0.
double canberra(std::span<const double> p, std::span<const double> q);

/// Ratios with undefined entries mapped to 0, for distance computations.
std::vector<double> defined_ratios(const RepresentationProfile& profile);

struct ProfileOrdering {
  std::vector<RepresentationProfile> profiles;  // left-to-right leaf order
  cluster::Dendrogram tree;                     // empty when < 2 profiles
};

/// Average-linkage clustering under Canberra distance. Profiles are sorted
/// by name before clustering, so the result does not depend on input order.
ProfileOrdering order_profiles(std::vector<RepresentationProfile> profiles);

/// Region (column) order obtained the same way from each region's ratios
/// across datasets. Identity when fewer than two profiles or regions.
std::vector<std::size_t> order_regions(std::span<const RepresentationProfile> profiles);

/// Regions whose expected count (n_names x reference proportion) is below 5.
std::vector<std::string> small_count_warnings(const OriginDistribution& target,
                                              const OriginDistribution& reference);

struct ReportProvenance {
  std::string model_sha256;
  std::string operator_source;
  std::string reference_name;
  bool corrected = true;
  std::string config_json = "{}";
};

struct ReportFiles {
  std::filesystem::path ratios_csv;
  std::filesystem::path distributions_csv;
  std::filesystem::path bundle_json;
};

/// Writes ratios.csv (datasets x regions, both in clustered order),
/// distributions.csv and report.json under `dir`.
ReportFiles emit_report(const ProfileOrdering& ordering,
                        std::span<const OriginDistribution> distributions,
                        const OriginDistribution& reference,
                        const ReportProvenance& provenance,
                        const std::filesystem::path& dir);

std::string distribution_json(const OriginDistribution& d);

}  // namespace onoma::diversity
