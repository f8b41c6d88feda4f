#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "onoma/classifier.hpp"
#include "onoma/corpus.hpp"
#include "onoma/random.hpp"

namespace onoma::pipeline {
struct PipelineConfig;
}

namespace onoma::synth {

/// Markov chain over letters with an implicit start context and a stop
/// outcome. Row s of `transitions` is the distribution over alphabet letters
/// followed by stop, given the last `order` emitted letters (state 0 pads the
/// beginning).
struct RegionGenerator {
  std::string label;
  std::u32string alphabet;
  int order = 1;
  std::size_t min_length = 3;
  std::size_t max_length = 12;
  std::vector<std::vector<double>> transitions;

  std::size_t state_count() const;
  /// Mixes `(1 - overlap) * this + overlap * global`, same alphabet layout.
  RegionGenerator mixed_with(const RegionGenerator& global, double overlap) const;
  std::string sample(Rng& rng) const;
};

struct CountrySpec {
  std::string code;
  double volume = 1.0;  // scales occurrence counts (uneven academic output)
};

struct RegionSpec {
  std::string label;
  std::string alphabet;  // empty: the global alphabet
  std::vector<CountrySpec> countries;
};

struct PopulationSpec {
  std::string name;
  std::size_t size = 2000;
  std::map<std::string, double> mix;  // region label -> weight
};

struct SynthSpec {
  std::uint64_t seed = 1;
  double overlap = 0.3;
  std::size_t names_per_country = 500;
  int chain_order = 1;
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::size_t min_length = 3;
  std::size_t max_length = 12;
  double stop_probability = 0.17;
  /// Exponent applied to uniform draws when building transition rows; larger
  /// values give peakier, more region-specific chains.
  double concentration = 4.0;
  /// Chance that a name is also observed once in some other country.
  double spread_probability = 0.05;
  std::vector<RegionSpec> regions;
  std::vector<PopulationSpec> populations;

  /// `n_regions` regions R1..Rn, each with `countries_per_region` registry
  /// countries, plus a reference and a target population whose mixes differ
  /// from the (uniform) training composition.
  static SynthSpec uniform(std::size_t n_regions, std::size_t countries_per_region,
                           std::size_t names_per_country, double overlap, std::uint64_t seed);

  void validate() const;
  std::string to_json() const;
  static SynthSpec from_json(std::string_view json, const std::string& source);
};

struct Population {
  std::string name;
  std::vector<std::string> surnames;
  std::vector<std::string> true_regions;  // parallel to surnames
  std::map<std::string, double> true_proportions;
};

struct SynthCorpus {
  corpus::OccurrenceTable table;
  std::map<std::string, std::string> truth;           // surname -> region
  std::map<std::string, std::string> country_region;  // country -> region
  std::vector<std::string> regions;                   // sorted labels
  std::vector<Population> populations;
};

/// Deterministic in the seed. Throws ConfigError when a name cannot be drawn
/// without collision within 100 attempts.
SynthCorpus generate(const SynthSpec& spec);

/// corpus.tsv, truth.tsv, countries.tsv and populations/<name>.txt (+ .truth.tsv).
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

struct RegionScore {
  std::string region;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t support = 0;
};

struct Scorecard {
  std::uint64_t seed = 0;
  double overlap = 0.0;
  bool typology_exact = false;
  std::vector<RegionScore> regions;  // against ground truth, evaluation split
  double accuracy = 0.0;
  classifier::EvalReport eval;  // the pipeline's own evaluation report
  std::string population;
  double raw_l1 = 0.0;
  double corrected_l1 = 0.0;
  std::size_t core_names = 0;

  std::string to_json() const;
};

/// corpus -> typology (k = number of true regions, true anchors) -> train ->
/// evaluate -> calibrate on the first population -> distribution, scored
/// against the ground truth. `config` supplies thresholds; the spec's seed
/// drives every random stage. With `true_typology` the clustering stage is
/// skipped and names are labeled with their generating region.
Scorecard score_pipeline(const SynthSpec& spec, const pipeline::PipelineConfig& config,
                         bool true_typology = false);

}  // namespace onoma::synth
