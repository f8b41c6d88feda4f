#include "onoma/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "onoma/error.hpp"
#include "onoma/io.hpp"
#include "onoma/random.hpp"

namespace onoma::classifier {

Split split(std::span<const LabeledName> labeled, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must be in (0, 1)");
  }
  std::map<std::string, std::vector<LabeledName>> by_region;
  for (const auto& n : labeled) by_region[n.region].push_back(n);

  Split out;
  Rng rng(seed);
  for (auto& [region, names] : by_region) {
    if (names.size() < 2) {
      throw InputError("region '" + region + "' has fewer than 2 names; cannot split");
    }
    std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) {
      return a.surname < b.surname;
    });
    rng.shuffle(std::span<LabeledName>(names));
    // The epsilon keeps 0.85 * 100 from rounding up to 86.
    const double exact = train_fraction * static_cast<double>(names.size());
    const auto n_train = std::min(
        names.size(), static_cast<std::size_t>(std::ceil(exact - 1e-9)));
    out.train.insert(out.train.end(), names.begin(),
                     names.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.eval.insert(out.eval.end(), names.begin() + static_cast<std::ptrdiff_t>(n_train),
                    names.end());
  }
  return out;
}

TrainedModel::TrainedModel(std::vector<std::string> regions, features::Vocabulary vocabulary,
                           std::vector<double> log_priors,
                           std::vector<double> log_likelihoods, double alpha,
                           features::NGramConfig config)
    : regions_(std::move(regions)),
      vocabulary_(std::move(vocabulary)),
      log_priors_(std::move(log_priors)),
      log_likelihoods_(std::move(log_likelihoods)),
      alpha_(alpha),
      config_(std::move(config)) {
  if (regions_.empty()) throw InputError("model has no regions");
  if (!std::is_sorted(regions_.begin(), regions_.end()) ||
      std::adjacent_find(regions_.begin(), regions_.end()) != regions_.end()) {
    throw InputError("model regions must be sorted and unique");
  }
  if (log_priors_.size() != regions_.size() ||
      log_likelihoods_.size() != regions_.size() * vocabulary_.size()) {
    throw InputError("model parameter dimensions do not match regions x vocabulary");
  }
  if (!(alpha_ > 0.0)) throw ConfigError("smoothing alpha must be positive");
  config_.validate();
}

std::size_t TrainedModel::region_index(std::string_view label) const {
  auto it = std::lower_bound(regions_.begin(), regions_.end(), label);
  if (it == regions_.end() || *it != label) return regions_.size();
  return static_cast<std::size_t>(it - regions_.begin());
}

namespace {

using nlohmann::json;

void append_numbers(std::string& out, std::span<const double> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += io::format_exact(values[i]);
  }
  out += ']';
}

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

std::string string_array(std::span<const std::string> items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += json_string(items[i]);
  }
  return out + ']';
}

}  // namespace

std::string TrainedModel::to_json() const {
  // Written by hand so every number carries 17 significant digits.
  std::string out = "{\n";
  out += "  \"version\": " + std::to_string(kFormatVersion) + ",\n";
  out += "  \"regions\": " + string_array(regions_) + ",\n";
  out += "  \"vocabulary\": " + string_array(vocabulary_.tokens()) + ",\n";
  out += "  \"log_priors\": ";
  append_numbers(out, log_priors_);
  out += ",\n  \"log_likelihoods\": ";
  append_numbers(out, log_likelihoods_);
  out += ",\n  \"alpha\": " + io::format_exact(alpha_) + ",\n";
  out += "  \"feature_config\": {\"n_values\": [";
  for (std::size_t i = 0; i < config_.n_values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(config_.n_values[i]);
  }
  out += "], \"pad_boundaries\": ";
  out += config_.pad_boundaries ? "true" : "false";
  out += ", \"start_marker\": " + json_string(config_.start_marker);
  out += ", \"end_marker\": " + json_string(config_.end_marker) + "}\n}\n";
  return out;
}

TrainedModel TrainedModel::from_json(std::string_view text, const std::string& source) {
  try {
    const json j = json::parse(text);
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw InputError(source + ": unsupported model version " + std::to_string(version));
    }
    features::NGramConfig config;
    const auto& fc = j.at("feature_config");
    config.n_values = fc.at("n_values").get<std::vector<int>>();
    config.pad_boundaries = fc.at("pad_boundaries").get<bool>();
    config.start_marker = fc.at("start_marker").get<std::string>();
    config.end_marker = fc.at("end_marker").get<std::string>();
    return TrainedModel(j.at("regions").get<std::vector<std::string>>(),
                        features::Vocabulary(j.at("vocabulary").get<std::vector<std::string>>()),
                        j.at("log_priors").get<std::vector<double>>(),
                        j.at("log_likelihoods").get<std::vector<double>>(),
                        j.at("alpha").get<double>(), std::move(config));
  } catch (const json::exception& e) {
    throw InputError(source + ": malformed model file: " + e.what());
  } catch (const ConfigError& e) {
    throw InputError(source + ": " + e.what());
  }
}

TrainedModel train(std::span<const LabeledName> train_set, const TrainOptions& opts) {
  opts.features.validate();
  if (!(opts.alpha > 0.0)) throw ConfigError("smoothing alpha must be positive");
  if (train_set.empty()) throw InputError("empty training set");

  std::vector<std::string> regions = opts.regions;
  if (regions.empty()) {
    for (const auto& n : train_set) regions.push_back(n.region);
  }
  std::sort(regions.begin(), regions.end());
  regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
  const std::size_t n_regions = regions.size();

  std::vector<std::size_t> label(train_set.size());
  std::vector<std::size_t> names_per_region(n_regions, 0);
  std::vector<std::string> surnames;
  surnames.reserve(train_set.size());
  for (std::size_t i = 0; i < train_set.size(); ++i) {
    auto it = std::lower_bound(regions.begin(), regions.end(), train_set[i].region);
    if (it == regions.end() || *it != train_set[i].region) {
      throw InputError("training label '" + train_set[i].region + "' is not a model region");
    }
    label[i] = static_cast<std::size_t>(it - regions.begin());
    ++names_per_region[label[i]];
    surnames.push_back(train_set[i].surname);
  }
  for (std::size_t r = 0; r < n_regions; ++r) {
    if (names_per_region[r] == 0) {
      throw InputError("region '" + regions[r] + "' has no training names");
    }
  }

  auto vocab = features::build_vocabulary(surnames, opts.features, opts.min_df);
  const std::size_t v = vocab.size();

  // Integer counts, so the reduction order cannot change the result.
  std::vector<std::uint64_t> counts(n_regions * v, 0);
  const auto n = static_cast<std::ptrdiff_t>(train_set.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(n_regions * v, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      for (const auto& [tok, c] : features::extract_indexed(surnames[idx], opts.features, vocab)) {
        local[label[idx] * v + tok] += c;
      }
    }
#pragma omp critical
    for (std::size_t k = 0; k < local.size(); ++k) counts[k] += local[k];
  }

  std::vector<double> log_priors(n_regions);
  std::vector<double> log_lik(n_regions * v);
  const double total_names = static_cast<double>(train_set.size());
  for (std::size_t r = 0; r < n_regions; ++r) {
    log_priors[r] = std::log(static_cast<double>(names_per_region[r]) / total_names);
    std::uint64_t total_tokens = 0;
    for (std::size_t t = 0; t < v; ++t) total_tokens += counts[r * v + t];
    const double denom =
        static_cast<double>(total_tokens) + opts.alpha * static_cast<double>(v);
    for (std::size_t t = 0; t < v; ++t) {
      log_lik[r * v + t] =
          std::log((static_cast<double>(counts[r * v + t]) + opts.alpha) / denom);
    }
  }
  return TrainedModel(std::move(regions), std::move(vocab), std::move(log_priors),
                      std::move(log_lik), opts.alpha, opts.features);
}

Classification classify(const TrainedModel& model, std::string_view surname) {
  const std::size_t n_regions = model.regions().size();
  Classification out;
  out.scores = model.log_priors();
  const auto tokens =
      features::extract_indexed(surname, model.feature_config(), model.vocabulary());
  out.prior_only = tokens.empty();
  for (std::size_t r = 0; r < n_regions; ++r) {
    double s = 0.0;
    for (const auto& [tok, c] : tokens) s += c * model.log_likelihood(r, tok);
    out.scores[r] += s;
  }
  const auto best = std::max_element(out.scores.begin(), out.scores.end());
  out.label = static_cast<std::size_t>(best - out.scores.begin());
  const double top = *best;
  out.posterior.resize(n_regions);
  double z = 0.0;
  for (std::size_t r = 0; r < n_regions; ++r) {
    out.posterior[r] = std::exp(out.scores[r] - top);
    z += out.posterior[r];
  }
  for (double& p : out.posterior) p /= z;
  return out;
}

std::vector<std::size_t> classify_labels(const TrainedModel& model,
                                         std::span<const std::string> surnames,
                                         std::vector<bool>* prior_only) {
  std::vector<std::size_t> labels(surnames.size());
  std::vector<char> flags(surnames.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(surnames.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto c = classify(model, surnames[idx]);
    labels[idx] = c.label;
    flags[idx] = c.prior_only ? 1 : 0;
  }
  if (prior_only != nullptr) prior_only->assign(flags.begin(), flags.end());
  return labels;
}

std::vector<std::size_t> classify_labels_serial(const TrainedModel& model,
                                                std::span<const std::string> surnames,
                                                std::vector<bool>* prior_only) {
  std::vector<std::size_t> labels;
  labels.reserve(surnames.size());
  if (prior_only != nullptr) prior_only->clear();
  for (const auto& s : surnames) {
    const auto c = classify(model, s);
    labels.push_back(c.label);
    if (prior_only != nullptr) prior_only->push_back(c.prior_only);
  }
  return labels;
}

double EvalReport::total() const {
  double t = 0.0;
  for (const auto& row : confusion) {
    for (double c : row) t += c;
  }
  return t;
}

EvalReport report_from_confusion(std::vector<std::string> regions,
                                 std::vector<std::vector<double>> confusion) {
  const std::size_t k = regions.size();
  if (confusion.size() != k) throw InputError("confusion matrix must be square over regions");
  for (const auto& row : confusion) {
    if (row.size() != k) throw InputError("confusion matrix must be square over regions");
  }
  EvalReport r;
  r.regions = std::move(regions);
  r.confusion = std::move(confusion);
  r.precision.assign(k, 0.0);
  r.recall.assign(k, 0.0);
  r.support.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      row += r.confusion[i][j];
      col += r.confusion[j][i];
    }
    r.support[i] = col;
    r.precision[i] = row > 0.0 ? r.confusion[i][i] / row : 0.0;
    r.recall[i] = col > 0.0 ? r.confusion[i][i] / col : 0.0;
  }
  return r;
}

EvalReport evaluate(const TrainedModel& model, std::span<const LabeledName> eval_set) {
  const std::size_t k = model.regions().size();
  std::vector<std::size_t> actual(eval_set.size());
  std::vector<std::string> surnames;
  surnames.reserve(eval_set.size());
  for (std::size_t i = 0; i < eval_set.size(); ++i) {
    actual[i] = model.region_index(eval_set[i].region);
    if (actual[i] == k) {
      throw InputError("evaluation label '" + eval_set[i].region + "' is not a model region");
    }
    surnames.push_back(eval_set[i].surname);
  }
  const auto guessed = classify_labels(model, surnames);
  std::vector<std::vector<double>> confusion(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < eval_set.size(); ++i) confusion[guessed[i]][actual[i]] += 1.0;
  return report_from_confusion(model.regions(), std::move(confusion));
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["regions"] = regions;
  j["confusion"] = confusion;
  j["confusion_orientation"] = "rows=guessed, columns=actual";
  j["precision"] = precision;
  j["recall"] = recall;
  j["support"] = support;
  j["total"] = total();
  return j.dump(2) + "\n";
}

std::string EvalReport::confusion_csv() const {
  std::ostringstream out;
  out << "guessed\\actual";
  for (const auto& r : regions) out << ',' << r;
  out << '\n';
  for (std::size_t i = 0; i < regions.size(); ++i) {
    out << regions[i];
    for (double c : confusion[i]) out << ',' << io::format_exact(c);
    out << '\n';
  }
  return out.str();
}

}  // namespace onoma::classifier
