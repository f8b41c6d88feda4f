#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onoma/classifier.hpp"
#include "onoma/corpus.hpp"
#include "onoma/correction.hpp"
#include "onoma/diversity.hpp"
#include "onoma/features.hpp"
#include "onoma/typology.hpp"

namespace onoma::pipeline {

/// Every tunable of the end-to-end run. Loaded from JSON; command-line flags
/// override individual fields afterwards.
struct PipelineConfig {
  // inputs
  std::filesystem::path corpus;
  std::filesystem::path registry;   // empty: bundled
  std::filesystem::path overrides;  // empty: none
  std::filesystem::path reference;  // population used for prior reweighting
  std::vector<std::filesystem::path> targets;
  std::filesystem::path synth_spec;  // generate corpus and populations first
  std::filesystem::path output_dir = "onoma-out";

  bool header = false;
  bool strict = false;
  text::NormalizeOptions normalize;
  corpus::FilterOptions filter;
  std::size_t min_core_names = 20;
  std::size_t min_df = 1;
  std::size_t k_regions = 7;
  features::NGramConfig features;
  double alpha = 0.1;
  double train_fraction = 0.85;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> anchors;
  bool published_overrides = false;
  /// Cluster profiles built from corrected (true) or raw guessed shares.
  bool corrected_profiles = true;
  int threads = 0;

  /// Throws ConfigError for out-of-range values or a missing seed.
  void validate() const;

  /// Relative paths in the document are resolved against `base_dir`.
  static PipelineConfig from_json(std::string_view json, const std::filesystem::path& base_dir,
                                  const std::string& source);
  /// Parameters only (no paths), for report provenance.
  std::string parameters_json() const;
};

/// Outputs of the corpus -> model stages.
struct ModelStages {
  std::vector<corpus::CoreName> core_names;
  typology::CountryFeatureMatrix matrix;
  cluster::Dendrogram dendrogram;
  typology::RegionTypology typology;
  typology::Relabeled labeled;
  classifier::Split split;
  classifier::TrainedModel model;
  classifier::EvalReport eval;
};

/// Filter, cluster, cut, relabel, split and train. Core names of countries
/// below `min_core_names` are dropped before relabeling.
ModelStages build_model(const corpus::OccurrenceTable& table, const PipelineConfig& config,
                        std::span<const typology::Override> overrides);

/// Label the eval split with a supplied typology instead of clustering.
ModelStages build_model_with_typology(const corpus::OccurrenceTable& table,
                                      const PipelineConfig& config,
                                      typology::RegionTypology typology);

struct Calibration {
  std::vector<double> target_priors;  // uncorrected shares on the reference
  correction::ConfusionCounts raw;
  correction::ConfusionCounts reweighted;
  correction::CorrectionOperator op;
};

/// Confusion from `eval`, priors from the uncorrected classifier on the
/// reference surnames, reweight, row-normalize.
Calibration calibrate(const classifier::EvalReport& eval, const classifier::TrainedModel& model,
                      std::span<const std::string> reference_surnames,
                      const text::NormalizeOptions& normalize,
                      const std::string& source_name = "evaluation split");

/// Same with explicit target priors.
Calibration calibrate_with_priors(const correction::ConfusionCounts& confusion,
                                  std::span<const double> priors,
                                  const std::string& source_name);

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
};

/// Runs every stage and writes all artifacts under config.output_dir.
/// Output bytes depend only on inputs, config and seed.
RunSummary run_pipeline(const PipelineConfig& config);

/// Stage seed derived from the configured root seed.
std::uint64_t split_seed(std::uint64_t root);

}  // namespace onoma::pipeline
