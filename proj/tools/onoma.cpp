// Command-line front end for the surname-origin pipeline.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "onoma/classifier.hpp"
#include "onoma/cluster.hpp"
#include "onoma/corpus.hpp"
#include "onoma/correction.hpp"
#include "onoma/diversity.hpp"
#include "onoma/error.hpp"
#include "onoma/io.hpp"
#include "onoma/parallel.hpp"
#include "onoma/pipeline.hpp"
#include "onoma/registry.hpp"
#include "onoma/synth.hpp"
#include "onoma/typology.hpp"

namespace fs = std::filesystem;
using namespace onoma;

namespace {

constexpr const char* kFormats = R"(File formats (UTF-8, tab-separated unless noted):
  corpus TSV       surname<TAB>country<TAB>count, optional header row (--header);
                   country is an ISO alpha-2 code from the registry
  registry TSV     code<TAB>name
  core-name TSV    surname<TAB>country<TAB>hhi<TAB>max_frequency (header row)
  overrides TSV    REASSIGN<TAB>country<TAB>region  or  DELETE<TAB>country; '#' comments
  typology TSV     country<TAB>region, region DELETED for removed countries
  labeled TSV      surname<TAB>region
  name list        one surname per line, blank lines ignored
  model JSON       version, regions, vocabulary, log_priors, log_likelihoods
                   (row-major regions x vocabulary), alpha, feature_config
  confusion CSV    header "guessed\actual,<regions...>", one row per guessed region
  operator CSV     '# key: value' provenance lines, then P(actual|guessed) in the
                   confusion layout; every row sums to 1
  synth spec JSON  seed, overlap, names_per_country, chain_order, alphabet,
                   min_length, max_length, stop_probability, concentration,
                   spread_probability, n_regions + countries_per_region or an
                   explicit regions list, populations [{name, size, mix}]
  pipeline JSON    corpus | synth_spec, registry, overrides, reference, targets,
                   output_dir, header, strict, strip_diacritics, hhi_min,
                   freq_min, hhi_basis, min_core_names, min_df, k_regions,
                   n_values, pad_boundaries, alpha, train_fraction, seed,
                   anchors, published_overrides, corrected_profiles, threads
Exit codes: 0 ok, 1 usage, 2 input format, 3 configuration, 4 internal invariant.
Environment: ONOMA_THREADS caps the worker threads (0 = all cores).)";

struct IngestFlags {
  bool header = false;
  bool strict = false;
  bool strip = false;
  std::string registry;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--header", header, "Skip the first row of the corpus");
    cmd->add_flag("--strict", strict, "Unknown country codes are errors instead of warnings");
    cmd->add_flag("--strip-diacritics", strip, "Remove combining marks during normalization");
    cmd->add_option("--registry", registry, "Country registry TSV (default: bundled list)")
        ->check(CLI::ExistingFile);
  }

  corpus::OccurrenceTable load(const std::string& path) const {
    std::optional<CountryRegistry> reg;
    if (!registry.empty()) {
      auto in = io::open_input(registry);
      reg = CountryRegistry::read_tsv(in, registry);
    }
    corpus::IngestOptions opts;
    opts.header = header;
    opts.strict = strict;
    opts.normalize.strip_diacritics = strip;
    opts.registry = reg ? &*reg : nullptr;
    auto in = io::open_input(path);
    auto result = corpus::ingest(in, path, opts);
    log::info(path + ": " + std::to_string(result.rows) + " rows, " +
              std::to_string(result.rejected) + " rejected");
    return std::move(result.table);
  }
};

struct FeatureFlags {
  std::vector<int> n_values{2, 3};
  bool no_pad = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n_values, "n-gram lengths")->delimiter(',');
    cmd->add_flag("--no-pad", no_pad, "Do not pad words with boundary markers");
  }
  features::NGramConfig config() const {
    features::NGramConfig c;
    c.n_values = n_values;
    c.pad_boundaries = !no_pad;
    c.validate();
    return c;
  }
};

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    io::write_file(out, content);
  }
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream s;
  w(s);
  return s.str();
}

classifier::TrainedModel load_model(const std::string& path) {
  return classifier::TrainedModel::from_json(io::read_file(path), path);
}

correction::CorrectionOperator load_operator(const std::string& path,
                                             const classifier::TrainedModel& model) {
  if (path.empty()) return correction::CorrectionOperator::identity(model.regions());
  auto in = io::open_input(path);
  return correction::read_operator_csv(in, path);
}

std::vector<std::string> load_names(const std::string& path) {
  auto in = io::open_input(path);
  return io::read_name_list(in);
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string metrics_table(const classifier::EvalReport& r) {
  std::string out = "region\tprecision\trecall\tsupport\n";
  for (std::size_t i = 0; i < r.regions.size(); ++i) {
    out += r.regions[i] + "\t" + io::format_sig(r.precision[i], 4) + "\t" +
           io::format_sig(r.recall[i], 4) + "\t" + io::format_sig(r.support[i], 10) + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"onoma: surname-origin inference from occurrence corpora"};
  app.footer(kFormats);
  app.require_subcommand(1);
  int threads = -1;
  bool verbose = false;
  bool quiet = false;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); overrides ONOMA_THREADS");
  app.add_flag("-v,--verbose", verbose, "Informational messages on stderr");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate, normalize and merge a corpus TSV");
  IngestFlags ingest_flags;
  std::string ingest_in, ingest_out;
  ingest_flags.attach(ingest_cmd);
  ingest_cmd->add_option("corpus", ingest_in, "Corpus TSV")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("-o,--output", ingest_out, "Merged corpus TSV (default stdout)");

  // filter-core
  auto* filter_cmd = app.add_subcommand("filter-core", "Extract concentrated core names");
  IngestFlags filter_flags;
  corpus::FilterOptions filter_opts;
  std::string filter_in, filter_out, filter_basis = "frequency";
  filter_flags.attach(filter_cmd);
  filter_cmd->add_option("corpus", filter_in, "Corpus TSV")->required()->check(CLI::ExistingFile);
  filter_cmd->add_option("--hhi-min", filter_opts.hhi_min, "Minimum concentration index")
      ->capture_default_str();
  filter_cmd->add_option("--freq-min", filter_opts.freq_min,
                         "Minimum frequency in the assigned country (fraction)")
      ->capture_default_str();
  filter_cmd->add_option("--basis", filter_basis, "Shares over 'frequency' or 'count'")
      ->check(CLI::IsMember({"frequency", "count"}))
      ->capture_default_str();
  filter_cmd->add_option("-o,--output", filter_out, "Core-name TSV (default stdout)");

  // typology
  auto* typo_cmd = app.add_subcommand(
      "typology", "Cluster countries by n-gram profile, cut into regions and relabel core names");
  std::string typo_in, typo_dir = ".", typo_overrides;
  std::size_t typo_k = 7, typo_min_core = 20;
  bool typo_published = false;
  std::map<std::string, std::string> typo_anchors;
  FeatureFlags typo_features;
  typo_cmd->add_option("core_names", typo_in, "Core-name TSV")->required()->check(CLI::ExistingFile);
  typo_cmd->add_option("-k,--regions", typo_k, "Number of clusters")->capture_default_str();
  typo_cmd->add_option("--min-core-names", typo_min_core, "Minimum core names per country")
      ->capture_default_str();
  typo_cmd->add_option("--overrides", typo_overrides, "Overrides TSV")->check(CLI::ExistingFile);
  typo_cmd->add_flag("--published-overrides", typo_published,
                     "Apply the bundled reassignments and deletions for the seven world regions");
  typo_cmd->add_option("--anchor", typo_anchors, "REGION=COUNTRY naming anchor (repeatable)")
      ->delimiter(',');
  typo_features.attach(typo_cmd);
  typo_cmd->add_option("-d,--output-dir", typo_dir,
                       "Writes dendrogram.txt, typology.tsv, labeled.tsv");

  // train
  auto* train_cmd = app.add_subcommand("train", "Split labeled names and fit the classifier");
  std::string train_in, train_dir = ".";
  std::optional<std::uint64_t> train_seed;
  double train_alpha = 0.1, train_fraction = 0.85;
  std::size_t train_min_df = 1;
  FeatureFlags train_features;
  train_cmd->add_option("labeled", train_in, "Labeled TSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--seed", train_seed, "Root seed for the split")->required();
  train_cmd->add_option("--alpha", train_alpha, "Additive smoothing")->capture_default_str();
  train_cmd->add_option("--train-fraction", train_fraction, "Share of each region used to train")
      ->capture_default_str();
  train_cmd->add_option("--min-df", train_min_df, "Minimum document frequency for a token")
      ->capture_default_str();
  train_features.attach(train_cmd);
  train_cmd->add_option("-d,--output-dir", train_dir,
                        "Writes model.json, vocabulary.txt, train.tsv, eval.tsv");

  // evaluate
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Confusion matrix and precision/recall on a labeled evaluation set");
  std::string eval_model, eval_set, eval_confusion, eval_dir;
  eval_cmd->add_option("--model", eval_model, "Model JSON")->check(CLI::ExistingFile);
  eval_cmd->add_option("eval_set", eval_set, "Labeled TSV")->check(CLI::ExistingFile);
  eval_cmd->add_option("--confusion", eval_confusion,
                       "Score an existing confusion CSV instead of running the model")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("-d,--output-dir", eval_dir, "Writes eval_report.json and confusion.csv");

  // calibrate
  auto* cal_cmd = app.add_subcommand(
      "calibrate", "Reweight the confusion matrix to reference priors and build the operator");
  std::string cal_model, cal_confusion, cal_reference, cal_out;
  std::vector<double> cal_priors;
  cal_cmd->add_option("--confusion", cal_confusion, "Confusion CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cal_cmd->add_option("--model", cal_model, "Model JSON (to classify the reference)")
      ->check(CLI::ExistingFile);
  cal_cmd->add_option("--reference", cal_reference, "Reference name list")
      ->check(CLI::ExistingFile);
  cal_cmd->add_option("--priors", cal_priors, "Explicit target priors, in confusion order")
      ->delimiter(',');
  cal_cmd->add_option("-o,--output", cal_out, "Operator CSV (default stdout)");

  // classify-population
  auto* pop_cmd = app.add_subcommand("classify-population",
                                     "Corrected origin distribution of one surname list");
  std::string pop_model, pop_operator, pop_names, pop_out, pop_name;
  bool pop_strip = false;
  pop_cmd->add_option("--model", pop_model, "Model JSON")->required()->check(CLI::ExistingFile);
  pop_cmd->add_option("--operator", pop_operator, "Operator CSV (default: identity)")
      ->check(CLI::ExistingFile);
  pop_cmd->add_option("names", pop_names, "Name list")->required()->check(CLI::ExistingFile);
  pop_cmd->add_option("--name", pop_name, "Dataset name (default: file stem)");
  pop_cmd->add_flag("--strip-diacritics", pop_strip, "Remove combining marks");
  pop_cmd->add_option("-o,--output", pop_out, "Distribution JSON (default stdout)");

  // compare
  auto* cmp_cmd = app.add_subcommand(
      "compare", "Representation ratios against a reference, ordered by Canberra clustering");
  std::string cmp_model, cmp_operator, cmp_reference, cmp_dir = "report";
  std::vector<std::string> cmp_targets;
  bool cmp_strip = false;
  cmp_cmd->add_option("--model", cmp_model, "Model JSON")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--operator", cmp_operator, "Operator CSV (default: identity)")
      ->check(CLI::ExistingFile);
  cmp_cmd->add_option("--reference", cmp_reference, "Reference name list")
      ->required()
      ->check(CLI::ExistingFile);
  cmp_cmd->add_option("targets", cmp_targets, "Target name lists")
      ->required()
      ->check(CLI::ExistingFile);
  cmp_cmd->add_flag("--strip-diacritics", cmp_strip, "Remove combining marks");
  cmp_cmd->add_option("-d,--output-dir", cmp_dir,
                      "Writes ratios.csv, distributions.csv, report.json")
      ->capture_default_str();

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a synthetic corpus with ground truth, optionally scoring the pipeline");
  std::string synth_spec_path, synth_dir, synth_config;
  std::optional<std::uint64_t> synth_seed;
  std::size_t synth_regions = 7, synth_cpr = 3, synth_npc = 500;
  double synth_overlap = 0.3;
  bool synth_score = false, synth_true_typology = false;
  synth_cmd->add_option("--spec", synth_spec_path, "Synthetic spec JSON")->check(CLI::ExistingFile);
  synth_cmd->add_option("--seed", synth_seed, "Seed (overrides the spec)");
  synth_cmd->add_option("--regions", synth_regions, "Regions (without --spec)")
      ->capture_default_str();
  synth_cmd->add_option("--countries-per-region", synth_cpr, "Countries per region")
      ->capture_default_str();
  synth_cmd->add_option("--names-per-country", synth_npc, "Names per country")
      ->capture_default_str();
  synth_cmd->add_option("--overlap", synth_overlap, "Mixing weight of the shared chain")
      ->capture_default_str();
  synth_cmd->add_flag("--score", synth_score, "Run the pipeline and score it against the truth");
  synth_cmd->add_flag("--true-typology", synth_true_typology,
                      "Score with the generating regions instead of the clustered typology");
  synth_cmd->add_option("--config", synth_config, "Pipeline config JSON for scoring thresholds")
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("-d,--output-dir", synth_dir, "Writes corpus files and scorecard.json");

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run every stage from one config file");
  std::string pipe_config, pipe_out, pipe_corpus, pipe_synth;
  std::optional<std::uint64_t> pipe_seed;
  std::optional<std::size_t> pipe_k;
  std::optional<double> pipe_alpha;
  pipe_cmd->add_option("--config", pipe_config, "Pipeline config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  pipe_cmd->add_option("--seed", pipe_seed, "Override the config seed");
  pipe_cmd->add_option("--output-dir", pipe_out, "Override the output directory");
  pipe_cmd->add_option("--corpus", pipe_corpus, "Override the corpus path");
  pipe_cmd->add_option("--synth-spec", pipe_synth, "Override the synthetic spec path");
  pipe_cmd->add_option("-k,--regions", pipe_k, "Override k_regions");
  pipe_cmd->add_option("--alpha", pipe_alpha, "Override alpha");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::usage);
  }

  log::set_level(quiet ? log::Level::quiet : verbose ? log::Level::info : log::Level::warn);

  try {
    parallel::configure_from_env();
    if (threads >= 0) parallel::set_threads(threads);

    if (*ingest_cmd) {
      const auto table = ingest_flags.load(ingest_in);
      emit(ingest_out, render([&](std::ostream& o) { corpus::write_table(o, table); }));
    } else if (*filter_cmd) {
      filter_opts.basis =
          filter_basis == "count" ? corpus::ShareBasis::count : corpus::ShareBasis::frequency;
      if (!(filter_opts.hhi_min > 0.0 && filter_opts.hhi_min <= 1.0)) {
        throw ConfigError("--hhi-min must be in (0, 1]");
      }
      if (!(filter_opts.freq_min >= 0.0 && filter_opts.freq_min <= 1.0)) {
        throw ConfigError("--freq-min must be in [0, 1]");
      }
      const auto table = filter_flags.load(filter_in);
      const auto core = corpus::filter_core_names(table, filter_opts);
      log::info(std::to_string(core.size()) + " core names of " +
                std::to_string(table.surnames().size()) + " surnames");
      emit(filter_out, render([&](std::ostream& o) { corpus::write_core_names(o, core); }));
    } else if (*typo_cmd) {
      auto in = io::open_input(typo_in);
      const auto core = corpus::read_core_names(in, typo_in);
      std::vector<typology::Override> overrides;
      if (typo_published) overrides = typology::published_overrides();
      if (!typo_overrides.empty()) {
        auto oin = io::open_input(typo_overrides);
        auto extra = typology::read_overrides(oin, typo_overrides);
        overrides.insert(overrides.end(), extra.begin(), extra.end());
      }
      const auto matrix =
          typology::build_country_matrix(core, typo_features.config(), typo_min_core);
      const auto tree = typology::ward_cluster(matrix);
      typology::NamingOptions naming;
      naming.anchors = typo_anchors;
      for (std::size_t i = 0; i < matrix.rows(); ++i) {
        naming.weights[matrix.countries[i]] = matrix.core_name_counts[i];
      }
      const auto typ = typology::cut_dendrogram(tree, typo_k, overrides, naming);
      std::vector<corpus::CoreName> kept;
      for (const auto& c : core) {
        if (typ.covers(c.assigned_country)) kept.push_back(c);
      }
      const auto labeled = typology::relabel(kept, typ);
      const fs::path dir(typo_dir);
      io::write_file(dir / "dendrogram.txt",
                     render([&](std::ostream& o) { cluster::write_dendrogram(o, tree); }));
      io::write_file(dir / "typology.tsv",
                     render([&](std::ostream& o) { typology::write_typology(o, typ); }));
      io::write_file(dir / "labeled.tsv",
                     render([&](std::ostream& o) { typology::write_labeled(o, labeled.names); }));
      for (const auto& [region, n] : labeled.per_region) {
        log::info(region + ": " + std::to_string(n) + " names");
      }
    } else if (*train_cmd) {
      auto in = io::open_input(train_in);
      const auto labeled = typology::read_labeled(in, train_in);
      const auto split =
          classifier::split(labeled, train_fraction, pipeline::split_seed(*train_seed));
      classifier::TrainOptions opts;
      opts.alpha = train_alpha;
      opts.features = train_features.config();
      opts.min_df = train_min_df;
      if (!(train_alpha > 0.0)) throw ConfigError("--alpha must be positive");
      if (train_min_df < 1) throw ConfigError("--min-df must be at least 1");
      const auto model = classifier::train(split.train, opts);
      const fs::path dir(train_dir);
      io::write_file(dir / "model.json", model.to_json());
      io::write_file(dir / "vocabulary.txt", render([&](std::ostream& o) {
                       features::write_vocabulary(o, model.vocabulary());
                     }));
      io::write_file(dir / "train.tsv",
                     render([&](std::ostream& o) { typology::write_labeled(o, split.train); }));
      io::write_file(dir / "eval.tsv",
                     render([&](std::ostream& o) { typology::write_labeled(o, split.eval); }));
    } else if (*eval_cmd) {
      classifier::EvalReport report;
      if (!eval_confusion.empty()) {
        auto in = io::open_input(eval_confusion);
        auto counts = correction::read_confusion_csv(in, eval_confusion);
        report = classifier::report_from_confusion(counts.regions, counts.matrix);
      } else {
        if (eval_model.empty() || eval_set.empty()) {
          throw CLI::ValidationError("evaluate needs --model and an evaluation set, or --confusion");
        }
        const auto model = load_model(eval_model);
        auto in = io::open_input(eval_set);
        const auto labeled = typology::read_labeled(in, eval_set);
        report = classifier::evaluate(model, labeled);
      }
      if (!eval_dir.empty()) {
        const fs::path dir(eval_dir);
        io::write_file(dir / "eval_report.json", report.to_json());
        io::write_file(dir / "confusion.csv", report.confusion_csv());
      }
      std::cout << metrics_table(report);
    } else if (*cal_cmd) {
      auto in = io::open_input(cal_confusion);
      const auto counts = correction::read_confusion_csv(in, cal_confusion);
      pipeline::Calibration cal;
      if (!cal_priors.empty()) {
        cal = pipeline::calibrate_with_priors(counts, cal_priors, cal_confusion + " with --priors");
      } else {
        if (cal_model.empty() || cal_reference.empty()) {
          throw CLI::ValidationError("calibrate needs --priors, or --model with --reference");
        }
        const auto model = load_model(cal_model);
        if (model.regions() != counts.regions) {
          throw InputError("confusion regions do not match the model regions");
        }
        const auto ref = load_names(cal_reference);
        const auto report = classifier::report_from_confusion(counts.regions, counts.matrix);
        cal = pipeline::calibrate(report, model, ref, {},
                                  cal_confusion + " reweighted to " + stem(cal_reference));
      }
      emit(cal_out, correction::write_operator_csv(cal.op));
    } else if (*pop_cmd) {
      const auto model = load_model(pop_model);
      const auto op = load_operator(pop_operator, model);
      const auto names = load_names(pop_names);
      text::NormalizeOptions norm{pop_strip};
      const auto d = diversity::distribution(pop_name.empty() ? stem(pop_names) : pop_name, names,
                                             model, op, norm);
      emit(pop_out, diversity::distribution_json(d));
    } else if (*cmp_cmd) {
      const auto model = load_model(cmp_model);
      const auto op = load_operator(cmp_operator, model);
      text::NormalizeOptions norm{cmp_strip};
      const auto ref =
          diversity::distribution(stem(cmp_reference), load_names(cmp_reference), model, op, norm);
      std::vector<diversity::OriginDistribution> dists;
      std::vector<diversity::RepresentationProfile> profiles;
      for (const auto& t : cmp_targets) {
        dists.push_back(diversity::distribution(stem(t), load_names(t), model, op, norm));
        profiles.push_back(diversity::representation_ratios(dists.back(), ref));
      }
      const auto ordering = diversity::order_profiles(std::move(profiles));
      diversity::ReportProvenance prov;
      prov.model_sha256 = io::sha256_hex(io::read_file(cmp_model));
      prov.operator_source = cmp_operator.empty() ? "identity" : cmp_operator;
      prov.reference_name = ref.dataset_name;
      prov.corrected = !cmp_operator.empty();
      diversity::emit_report(ordering, dists, ref, prov, cmp_dir);
      std::cout << io::read_file(fs::path(cmp_dir) / "ratios.csv");
    } else if (*synth_cmd) {
      synth::SynthSpec spec =
          synth_spec_path.empty()
              ? synth::SynthSpec::uniform(synth_regions, synth_cpr, synth_npc, synth_overlap,
                                          synth_seed.value_or(1))
              : synth::SynthSpec::from_json(io::read_file(synth_spec_path), synth_spec_path);
      if (synth_seed) spec.seed = *synth_seed;
      spec.validate();
      if (synth_score) {
        pipeline::PipelineConfig cfg;
        if (!synth_config.empty()) {
          cfg = pipeline::PipelineConfig::from_json(io::read_file(synth_config),
                                                    fs::path(synth_config).parent_path(),
                                                    synth_config);
        }
        cfg.seed = spec.seed;
        const auto card = synth::score_pipeline(spec, cfg, synth_true_typology);
        if (!synth_dir.empty()) {
          io::write_file(fs::path(synth_dir) / "scorecard.json", card.to_json());
        }
        std::cout << card.to_json();
      }
      if (!synth_dir.empty()) {
        synth::write_corpus(synth::generate(spec), synth_dir);
        io::write_file(fs::path(synth_dir) / "spec.json", spec.to_json());
      } else if (!synth_score) {
        throw CLI::ValidationError("synth needs --output-dir or --score");
      }
    } else if (*pipe_cmd) {
      auto cfg = pipeline::PipelineConfig::from_json(
          io::read_file(pipe_config), fs::path(pipe_config).parent_path(), pipe_config);
      if (pipe_seed) cfg.seed = *pipe_seed;
      if (!pipe_out.empty()) cfg.output_dir = pipe_out;
      if (!pipe_corpus.empty()) {
        cfg.corpus = pipe_corpus;
        cfg.synth_spec.clear();
      }
      if (!pipe_synth.empty()) {
        cfg.synth_spec = pipe_synth;
        cfg.corpus.clear();
      }
      if (pipe_k) cfg.k_regions = *pipe_k;
      if (pipe_alpha) cfg.alpha = *pipe_alpha;
      if (threads >= 0) cfg.threads = threads;
      const auto summary = pipeline::run_pipeline(cfg);
      for (const auto& f : summary.files) log::info("wrote " + f.string());
      std::cout << "pipeline complete: " << summary.output_dir.string() << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "onoma: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::usage);
  } catch (const Error& e) {
    std::cerr << "onoma: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "onoma: internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::invariant);
  }
  return 0;
}
