#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onoma/features.hpp"
#include "onoma/typology.hpp"

namespace onoma::classifier {

using typology::LabeledName;

struct Split {
  std::vector<LabeledName> train;
  std::vector<LabeledName> eval;
};

/// Stratified split: within each region (names sorted, then shuffled by the
/// seeded generator) the first ceil(fraction * n) names go to training.
/// Throws ConfigError for fraction outside (0, 1), InputError for a region
/// with fewer than two names.
Split split(std::span<const LabeledName> labeled, double train_fraction, std::uint64_t seed);

/// Multinomial naive Bayes over n-gram counts with additive smoothing.
class TrainedModel {
 public:
  static constexpr int kFormatVersion = 1;

  TrainedModel() = default;
  TrainedModel(std::vector<std::string> regions, features::Vocabulary vocabulary,
               std::vector<double> log_priors, std::vector<double> log_likelihoods,
               double alpha, features::NGramConfig config);

  const std::vector<std::string>& regions() const { return regions_; }
  const features::Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<double>& log_priors() const { return log_priors_; }
  /// Row-major regions x vocabulary.
  const std::vector<double>& log_likelihoods() const { return log_likelihoods_; }
  double log_likelihood(std::size_t region, std::size_t token) const {
    return log_likelihoods_[region * vocabulary_.size() + token];
  }
  double alpha() const { return alpha_; }
  const features::NGramConfig& feature_config() const { return config_; }

  /// Index of a region label, or regions().size().
  std::size_t region_index(std::string_view label) const;

  /// Versioned JSON document. Serialization is deterministic.
  std::string to_json() const;
  static TrainedModel from_json(std::string_view json, const std::string& source);

 private:
  std::vector<std::string> regions_;
  features::Vocabulary vocabulary_;
  std::vector<double> log_priors_;
  std::vector<double> log_likelihoods_;
  double alpha_ = 0.1;
  features::NGramConfig config_;
};

struct TrainOptions {
  double alpha = 0.1;
  features::NGramConfig features;
  std::size_t min_df = 1;
  /// Regions the model must cover; empty means the labels present in the
  /// training set. A listed region without names is an error.
  std::vector<std::string> regions;
};

TrainedModel train(std::span<const LabeledName> train_set, const TrainOptions& opts = {});

struct Classification {
  std::vector<double> scores;     // unnormalized log-posteriors
  std::vector<double> posterior;  // softmax(scores)
  std::size_t label = 0;          // argmax; lowest index wins ties
  bool prior_only = false;        // no in-vocabulary n-gram
};

Classification classify(const TrainedModel& model, std::string_view surname);

/// Argmax labels for a batch of surnames, OpenMP-parallel over names.
/// `prior_only`, when given, receives one flag per name.
std::vector<std::size_t> classify_labels(const TrainedModel& model,
                                         std::span<const std::string> surnames,
                                         std::vector<bool>* prior_only = nullptr);

/// Single-threaded reference for classify_labels.
std::vector<std::size_t> classify_labels_serial(const TrainedModel& model,
                                                std::span<const std::string> surnames,
                                                std::vector<bool>* prior_only = nullptr);

/// confusion[guessed][actual] with derived per-region metrics.
struct EvalReport {
  std::vector<std::string> regions;
  std::vector<std::vector<double>> confusion;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> support;  // actual-class totals (column sums)

  double total() const;
  std::string to_json() const;
  std::string confusion_csv() const;
};

/// Precision (row-wise) and recall (column-wise) from a confusion matrix;
/// empty rows or columns give 0.
EvalReport report_from_confusion(std::vector<std::string> regions,
                                 std::vector<std::vector<double>> confusion);

/// Throws InputError for labels the model does not know.
EvalReport evaluate(const TrainedModel& model, std::span<const LabeledName> eval_set);

}  // namespace onoma::classifier
