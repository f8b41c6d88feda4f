#include "onoma/pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "onoma/error.hpp"
#include "onoma/io.hpp"
#include "onoma/parallel.hpp"
#include "onoma/random.hpp"
#include "onoma/registry.hpp"
#include "onoma/synth.hpp"

namespace onoma::pipeline {

namespace fs = std::filesystem;

std::uint64_t split_seed(std::uint64_t root) { return derive_seed(root, Stream::split); }

void PipelineConfig::validate() const {
  if (!(filter.hhi_min > 0.0 && filter.hhi_min <= 1.0)) {
    throw ConfigError("hhi_min must be in (0, 1]");
  }
  if (!(filter.freq_min >= 0.0 && filter.freq_min <= 1.0)) {
    throw ConfigError("freq_min must be in [0, 1]");
  }
  if (min_core_names < 1) throw ConfigError("min_core_names must be at least 1");
  if (min_df < 1) throw ConfigError("min_df must be at least 1");
  if (k_regions < 2) throw ConfigError("k_regions must be at least 2");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must be in (0, 1)");
  }
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (!seed) throw ConfigError("a seed is required (the split and synthetic stages are random)");
  features.validate();
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "corpus",         "registry",         "overrides",          "reference",
      "targets",        "synth_spec",       "output_dir",         "header",
      "strict",         "strip_diacritics", "hhi_min",            "freq_min",
      "hhi_basis",      "min_core_names",   "min_df",             "k_regions",
      "n_values",       "pad_boundaries",   "alpha",              "train_fraction",
      "seed",           "anchors",          "published_overrides", "corrected_profiles",
      "threads"};
  return keys;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string basis_name(corpus::ShareBasis b) {
  return b == corpus::ShareBasis::count ? "count" : "frequency";
}

}  // namespace

PipelineConfig PipelineConfig::from_json(std::string_view json, const fs::path& base_dir,
                                         const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw InputError(source + ": config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (known_keys().count(key) == 0) throw ConfigError(source + ": unknown config key '" + key + "'");
  }

  PipelineConfig c;
  try {
    if (j.contains("corpus")) c.corpus = resolve(base_dir, j["corpus"].get<std::string>());
    if (j.contains("registry")) c.registry = resolve(base_dir, j["registry"].get<std::string>());
    if (j.contains("overrides")) c.overrides = resolve(base_dir, j["overrides"].get<std::string>());
    if (j.contains("reference")) c.reference = resolve(base_dir, j["reference"].get<std::string>());
    if (j.contains("synth_spec")) {
      c.synth_spec = resolve(base_dir, j["synth_spec"].get<std::string>());
    }
    if (j.contains("output_dir")) {
      c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    }
    if (j.contains("targets")) {
      for (const auto& t : j["targets"]) c.targets.push_back(resolve(base_dir, t.get<std::string>()));
    }
    c.header = j.value("header", c.header);
    c.strict = j.value("strict", c.strict);
    c.normalize.strip_diacritics = j.value("strip_diacritics", false);
    c.filter.hhi_min = j.value("hhi_min", c.filter.hhi_min);
    c.filter.freq_min = j.value("freq_min", c.filter.freq_min);
    if (j.contains("hhi_basis")) {
      const auto b = j["hhi_basis"].get<std::string>();
      if (b == "frequency") {
        c.filter.basis = corpus::ShareBasis::frequency;
      } else if (b == "count") {
        c.filter.basis = corpus::ShareBasis::count;
      } else {
        throw ConfigError(source + ": hhi_basis must be 'frequency' or 'count'");
      }
    }
    c.min_core_names = j.value("min_core_names", c.min_core_names);
    c.min_df = j.value("min_df", c.min_df);
    c.k_regions = j.value("k_regions", c.k_regions);
    if (j.contains("n_values")) c.features.n_values = j["n_values"].get<std::vector<int>>();
    c.features.pad_boundaries = j.value("pad_boundaries", c.features.pad_boundaries);
    c.alpha = j.value("alpha", c.alpha);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("anchors")) c.anchors = j["anchors"].get<std::map<std::string, std::string>>();
    c.published_overrides = j.value("published_overrides", c.published_overrides);
    c.corrected_profiles = j.value("corrected_profiles", c.corrected_profiles);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source + ": bad value type: " + e.what());
  }
  return c;
}

std::string PipelineConfig::parameters_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["strip_diacritics"] = normalize.strip_diacritics;
  j["hhi_min"] = filter.hhi_min;
  j["freq_min"] = filter.freq_min;
  j["hhi_basis"] = basis_name(filter.basis);
  j["min_core_names"] = min_core_names;
  j["min_df"] = min_df;
  j["k_regions"] = k_regions;
  j["n_values"] = features.n_values;
  j["pad_boundaries"] = features.pad_boundaries;
  j["alpha"] = alpha;
  j["train_fraction"] = train_fraction;
  j["anchors"] = anchors;
  j["published_overrides"] = published_overrides;
  j["corrected_profiles"] = corrected_profiles;
  return j.dump();
}

namespace {

ModelStages finish(ModelStages st, std::span<const corpus::CoreName> kept,
                   const PipelineConfig& config) {
  st.labeled = typology::relabel(kept, st.typology);
  st.split = classifier::split(st.labeled.names, config.train_fraction, split_seed(*config.seed));
  classifier::TrainOptions opts;
  opts.alpha = config.alpha;
  opts.features = config.features;
  opts.min_df = config.min_df;
  opts.regions = st.typology.regions;
  st.model = classifier::train(st.split.train, opts);
  st.eval = classifier::evaluate(st.model, st.split.eval);
  return st;
}

}  // namespace

ModelStages build_model(const corpus::OccurrenceTable& table, const PipelineConfig& config,
                        std::span<const typology::Override> overrides) {
  config.validate();
  ModelStages st;
  st.core_names = corpus::filter_core_names(table, config.filter);
  st.matrix = typology::build_country_matrix(st.core_names, config.features, config.min_core_names);
  st.dendrogram = typology::ward_cluster(st.matrix);

  typology::NamingOptions naming;
  naming.anchors = config.anchors;
  for (std::size_t i = 0; i < st.matrix.rows(); ++i) {
    naming.weights[st.matrix.countries[i]] = st.matrix.core_name_counts[i];
  }
  st.typology = typology::cut_dendrogram(st.dendrogram, config.k_regions, overrides, naming);

  std::vector<corpus::CoreName> kept;
  for (const auto& c : st.core_names) {
    if (st.typology.covers(c.assigned_country)) kept.push_back(c);
  }
  if (kept.size() < st.core_names.size()) {
    log::info(std::to_string(st.core_names.size() - kept.size()) +
              " core names dropped: their countries have fewer than " +
              std::to_string(config.min_core_names) + " core names");
  }
  return finish(std::move(st), kept, config);
}

ModelStages build_model_with_typology(const corpus::OccurrenceTable& table,
                                      const PipelineConfig& config,
                                      typology::RegionTypology typology) {
  config.validate();
  ModelStages st;
  st.core_names = corpus::filter_core_names(table, config.filter);
  st.matrix = typology::build_country_matrix(st.core_names, config.features, config.min_core_names);
  st.dendrogram = typology::ward_cluster(st.matrix);
  st.typology = std::move(typology);
  std::vector<corpus::CoreName> kept;
  for (const auto& c : st.core_names) {
    if (st.typology.covers(c.assigned_country)) kept.push_back(c);
  }
  return finish(std::move(st), kept, config);
}

Calibration calibrate_with_priors(const correction::ConfusionCounts& confusion,
                                  std::span<const double> priors,
                                  const std::string& source_name) {
  Calibration cal;
  cal.raw = confusion;
  cal.raw.validate();
  cal.target_priors.assign(priors.begin(), priors.end());
  cal.reweighted = correction::reweight_priors(cal.raw, priors);
  cal.op = correction::correction_operator(cal.reweighted);
  cal.op.source_name = source_name;
  cal.op.target_priors = cal.target_priors;
  return cal;
}

Calibration calibrate(const classifier::EvalReport& eval, const classifier::TrainedModel& model,
                      std::span<const std::string> reference_surnames,
                      const text::NormalizeOptions& normalize, const std::string& source_name) {
  std::vector<std::string> names;
  for (const auto& s : reference_surnames) {
    auto n = text::normalize_surname(s, normalize);
    if (!n.empty()) names.push_back(std::move(n));
  }
  if (names.empty()) throw InputError("reference population contains no surnames");
  const auto labels = classifier::classify_labels(model, names);
  std::vector<double> priors(model.regions().size(), 0.0);
  for (std::size_t l : labels) priors[l] += 1.0;
  for (double& p : priors) p /= static_cast<double>(names.size());

  correction::ConfusionCounts counts{eval.regions, eval.confusion};
  return calibrate_with_priors(counts, priors, source_name);
}

namespace {

struct NamedList {
  std::string name;
  std::vector<std::string> surnames;
};

NamedList load_list(const fs::path& path) {
  auto in = io::open_input(path);
  return {path.stem().string(), io::read_name_list(in)};
}

std::string render(auto&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

}  // namespace

RunSummary run_pipeline(const PipelineConfig& input_config) {
  PipelineConfig config = input_config;
  config.validate();
  if (config.corpus.empty() == config.synth_spec.empty()) {
    throw ConfigError("exactly one of corpus and synth_spec must be configured");
  }
  if (config.threads > 0) parallel::set_threads(config.threads);

  // Read and validate every input before anything is written.
  corpus::OccurrenceTable table;
  std::optional<synth::SynthCorpus> generated;
  std::optional<NamedList> reference;
  std::vector<NamedList> targets;

  if (!config.synth_spec.empty()) {
    auto spec = synth::SynthSpec::from_json(io::read_file(config.synth_spec),
                                            config.synth_spec.string());
    spec.seed = *config.seed;
    generated = synth::generate(spec);
    table = generated->table;
    if (input_config.anchors.empty()) {
      for (const auto& r : spec.regions) config.anchors[r.label] = r.countries.front().code;
    }
    config.k_regions = spec.regions.size();
    for (const auto& p : generated->populations) {
      NamedList list{p.name, p.surnames};
      if (!reference && config.reference.empty()) reference = list;
      targets.push_back(std::move(list));
    }
  } else {
    std::optional<CountryRegistry> registry;
    if (!config.registry.empty()) {
      auto in = io::open_input(config.registry);
      registry = CountryRegistry::read_tsv(in, config.registry.string());
    }
    corpus::IngestOptions opts;
    opts.header = config.header;
    opts.strict = config.strict;
    opts.normalize = config.normalize;
    opts.registry = registry ? &*registry : nullptr;
    auto in = io::open_input(config.corpus);
    auto result = corpus::ingest(in, config.corpus.string(), opts);
    table = std::move(result.table);
  }
  if (!config.reference.empty()) reference = load_list(config.reference);
  for (const auto& t : config.targets) targets.push_back(load_list(t));

  std::vector<typology::Override> overrides;
  if (config.published_overrides) overrides = typology::published_overrides();
  if (!config.overrides.empty()) {
    auto in = io::open_input(config.overrides);
    auto extra = typology::read_overrides(in, config.overrides.string());
    overrides.insert(overrides.end(), extra.begin(), extra.end());
  }
  {
    std::set<std::string> names;
    for (const auto& t : targets) {
      if (!names.insert(t.name).second) {
        throw ConfigError("two target populations share the name '" + t.name + "'");
      }
    }
  }

  const ModelStages st = build_model(table, config, overrides);

  std::optional<Calibration> cal;
  correction::CorrectionOperator op;
  if (reference) {
    cal = calibrate(st.eval, st.model, reference->surnames, config.normalize,
                    "evaluation split reweighted to " + reference->name);
    op = cal->op;
  } else {
    correction::ConfusionCounts counts{st.eval.regions, st.eval.confusion};
    counts.validate();
    op = correction::correction_operator(counts);
    op.source_name = "evaluation split";
    log::warn("no reference population configured; operator is not prior-reweighted");
  }

  std::vector<diversity::OriginDistribution> dists;
  std::optional<diversity::OriginDistribution> ref_dist;
  const auto profile_op =
      config.corrected_profiles ? op : correction::CorrectionOperator::identity(st.model.regions());
  if (reference) {
    ref_dist = diversity::distribution(reference->name, reference->surnames, st.model, profile_op,
                                       config.normalize);
  }
  for (const auto& t : targets) {
    dists.push_back(
        diversity::distribution(t.name, t.surnames, st.model, profile_op, config.normalize));
  }

  // Everything computed; now write.
  const fs::path dir = config.output_dir;
  RunSummary summary;
  summary.output_dir = dir;
  auto emit = [&](const fs::path& rel, std::string_view content) {
    io::write_file(dir / rel, content);
    summary.files.push_back(dir / rel);
  };

  if (generated) {
    synth::write_corpus(*generated, dir / "synth");
    summary.files.push_back(dir / "synth");
  }
  const std::string model_json = st.model.to_json();
  emit("core_names.tsv", render([&](std::ostream& o) { corpus::write_core_names(o, st.core_names); }));
  emit("dendrogram.txt", render([&](std::ostream& o) { cluster::write_dendrogram(o, st.dendrogram); }));
  emit("typology.tsv", render([&](std::ostream& o) { typology::write_typology(o, st.typology); }));
  emit("labeled.tsv", render([&](std::ostream& o) { typology::write_labeled(o, st.labeled.names); }));
  emit("vocabulary.txt",
       render([&](std::ostream& o) { features::write_vocabulary(o, st.model.vocabulary()); }));
  emit("model.json", model_json);
  emit("eval_report.json", st.eval.to_json());
  emit("confusion.csv", st.eval.confusion_csv());
  emit("operator.csv", correction::write_operator_csv(op));

  if (ref_dist) {
    std::vector<diversity::RepresentationProfile> profiles;
    for (const auto& d : dists) profiles.push_back(diversity::representation_ratios(d, *ref_dist));
    const auto ordering = diversity::order_profiles(std::move(profiles));
    diversity::ReportProvenance prov;
    prov.model_sha256 = io::sha256_hex(model_json);
    prov.operator_source = "operator.csv";
    prov.reference_name = ref_dist->dataset_name;
    prov.corrected = config.corrected_profiles;
    prov.config_json = config.parameters_json();
    const auto files = diversity::emit_report(ordering, dists, *ref_dist, prov, dir / "report");
    summary.files.push_back(files.ratios_csv);
    summary.files.push_back(files.distributions_csv);
    summary.files.push_back(files.bundle_json);
  } else {
    for (const auto& d : dists) {
      emit(fs::path("distributions") / (d.dataset_name + ".json"), diversity::distribution_json(d));
    }
  }
  return summary;
}

}  // namespace onoma::pipeline
