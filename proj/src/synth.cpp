#include "onoma/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include <json.hpp>
#include <unicode/unistr.h>

#include "onoma/error.hpp"
#include "onoma/io.hpp"
#include "onoma/pipeline.hpp"
#include "onoma/registry.hpp"

namespace onoma::synth {

namespace {

std::u32string to_u32(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::string to_utf8(const std::u32string& s) {
  icu::UnicodeString u;
  for (char32_t c : s) u.append(static_cast<UChar32>(c));
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::size_t state_of(std::span<const std::size_t> history, int order, std::size_t letters) {
  // Symbols: 0 = before the start, 1 + i = letter i.
  std::size_t state = 0;
  for (int k = order; k >= 1; --k) {
    const std::size_t sym =
        history.size() >= static_cast<std::size_t>(k) ? history[history.size() - k] + 1 : 0;
    state = state * (letters + 1) + sym;
  }
  return state;
}

RegionGenerator build_chain(Rng& rng, const std::string& label, const std::u32string& alphabet,
                            const std::u32string& allowed, const SynthSpec& spec) {
  RegionGenerator g;
  g.label = label;
  g.alphabet = alphabet;
  g.order = spec.chain_order;
  g.min_length = spec.min_length;
  g.max_length = spec.max_length;
  const std::size_t letters = alphabet.size();
  g.transitions.assign(g.state_count(), std::vector<double>(letters + 1, 0.0));
  for (auto& row : g.transitions) {
    double sum = 0.0;
    for (std::size_t i = 0; i < letters; ++i) {
      const double u = rng.uniform01();
      if (allowed.find(alphabet[i]) == std::u32string::npos) continue;
      row[i] = std::pow(u, spec.concentration);
      sum += row[i];
    }
    if (sum <= 0.0) {
      // Degenerate draw: fall back to uniform over the allowed letters.
      for (std::size_t i = 0; i < letters; ++i) {
        row[i] = allowed.find(alphabet[i]) == std::u32string::npos ? 0.0 : 1.0;
        sum += row[i];
      }
    }
    for (std::size_t i = 0; i < letters; ++i) row[i] *= (1.0 - spec.stop_probability) / sum;
    row[letters] = spec.stop_probability;
  }
  return g;
}

std::string draw_unique(const RegionGenerator& chain, Rng& rng,
                        std::unordered_set<std::string>& seen) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::string name = text::normalize_surname(chain.sample(rng));
    if (seen.insert(name).second) return name;
  }
  throw ConfigError("synthetic generator for " + chain.label +
                    " could not produce a new name in 100 attempts; name space too small");
}

}  // namespace

std::size_t RegionGenerator::state_count() const {
  std::size_t n = 1;
  for (int k = 0; k < order; ++k) n *= alphabet.size() + 1;
  return n;
}

RegionGenerator RegionGenerator::mixed_with(const RegionGenerator& global, double overlap) const {
  if (global.alphabet != alphabet || global.order != order) {
    throw ConfigError("cannot mix chains over different alphabets or orders");
  }
  RegionGenerator out = *this;
  for (std::size_t s = 0; s < transitions.size(); ++s) {
    for (std::size_t i = 0; i < transitions[s].size(); ++i) {
      out.transitions[s][i] =
          (1.0 - overlap) * transitions[s][i] + overlap * global.transitions[s][i];
    }
  }
  return out;
}

std::string RegionGenerator::sample(Rng& rng) const {
  const std::size_t letters = alphabet.size();
  std::vector<std::size_t> history;
  std::u32string name;
  while (name.size() < max_length) {
    const auto& row = transitions[state_of(history, order, letters)];
    const bool may_stop = name.size() >= min_length;
    double mass = 0.0;
    for (std::size_t i = 0; i < letters; ++i) mass += row[i];
    if (may_stop) mass += row[letters];
    if (may_stop && mass <= 0.0) break;
    double u = rng.uniform01() * mass;
    std::size_t pick = letters;  // stop
    for (std::size_t i = 0; i < letters; ++i) {
      if (u < row[i]) {
        pick = i;
        break;
      }
      u -= row[i];
    }
    if (pick == letters) {
      if (may_stop) break;
      // Rounding left u past the last letter; take the last allowed one.
      for (std::size_t i = letters; i-- > 0;) {
        if (row[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick == letters) throw ConfigError("chain " + label + " has a row without letters");
    }
    history.push_back(pick);
    name.push_back(alphabet[pick]);
  }
  return to_utf8(name);
}

SynthSpec SynthSpec::uniform(std::size_t n_regions, std::size_t countries_per_region,
                             std::size_t names_per_country, double overlap,
                             std::uint64_t seed) {
  const auto& countries = CountryRegistry::bundled().countries();
  if (n_regions * countries_per_region > countries.size()) {
    throw ConfigError("not enough registry countries for the requested synthetic layout");
  }
  SynthSpec spec;
  spec.seed = seed;
  spec.overlap = overlap;
  spec.names_per_country = names_per_country;
  for (std::size_t r = 0; r < n_regions; ++r) {
    RegionSpec region;
    region.label = "R" + std::to_string(r + 1);
    if (n_regions >= 10 && r + 1 < 10) region.label = "R0" + std::to_string(r + 1);
    for (std::size_t c = 0; c < countries_per_region; ++c) {
      region.countries.push_back(
          {countries[r * countries_per_region + c].code, 1.0 + static_cast<double>(c % 3)});
    }
    spec.regions.push_back(std::move(region));
  }
  PopulationSpec reference{"reference", 2000, {}};
  PopulationSpec target{"target", 1000, {}};
  for (std::size_t r = 0; r < n_regions; ++r) {
    const auto& label = spec.regions[r].label;
    const double w = static_cast<double>(n_regions - r);
    reference.mix[label] = w * w;
    target.mix[label] = static_cast<double>(r + 1);
  }
  spec.populations = {reference, target};
  return spec;
}

void SynthSpec::validate() const {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("overlap must be in [0, 1]");
  if (chain_order < 1 || chain_order > 2) throw ConfigError("chain order must be 1 or 2");
  if (min_length < 1 || min_length > max_length) throw ConfigError("invalid length bounds");
  if (!(stop_probability > 0.0 && stop_probability < 1.0)) {
    throw ConfigError("stop probability must be in (0, 1)");
  }
  if (!(concentration > 0.0)) throw ConfigError("concentration must be positive");
  if (!(spread_probability >= 0.0 && spread_probability <= 1.0)) {
    throw ConfigError("spread probability must be in [0, 1]");
  }
  if (names_per_country == 0) throw ConfigError("names_per_country must be positive");
  if (alphabet.empty()) throw ConfigError("alphabet must not be empty");
  if (regions.empty()) throw ConfigError("synthetic spec needs at least one region");
  const auto global = to_u32(alphabet);
  std::set<std::string> labels;
  std::set<std::string> codes;
  for (const auto& r : regions) {
    if (r.label.empty() || !labels.insert(r.label).second) {
      throw ConfigError("region labels must be unique and non-empty");
    }
    for (char32_t c : to_u32(r.alphabet)) {
      if (global.find(c) == std::u32string::npos) {
        throw ConfigError("region " + r.label + " alphabet is not a subset of the global alphabet");
      }
    }
    if (r.countries.empty()) throw ConfigError("region " + r.label + " has no countries");
    for (const auto& c : r.countries) {
      if (!CountryRegistry::bundled().contains(c.code)) {
        throw ConfigError("unknown country code " + c.code + " in synthetic spec");
      }
      if (!codes.insert(c.code).second) {
        throw ConfigError("country " + c.code + " listed twice in synthetic spec");
      }
      if (!(c.volume > 0.0)) throw ConfigError("country volume must be positive");
    }
  }
  std::set<std::string> pop_names;
  for (const auto& p : populations) {
    if (p.name.empty() || !pop_names.insert(p.name).second) {
      throw ConfigError("population names must be unique and non-empty");
    }
    if (p.size == 0) throw ConfigError("population " + p.name + " is empty");
    double total = 0.0;
    for (const auto& [label, w] : p.mix) {
      if (labels.count(label) == 0) {
        throw ConfigError("population " + p.name + " mixes unknown region " + label);
      }
      if (!(w >= 0.0)) throw ConfigError("population weights must be non-negative");
      total += w;
    }
    if (!(total > 0.0)) throw ConfigError("population " + p.name + " has no positive weight");
  }
}

std::string SynthSpec::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["overlap"] = overlap;
  j["names_per_country"] = names_per_country;
  j["chain_order"] = chain_order;
  j["alphabet"] = alphabet;
  j["min_length"] = min_length;
  j["max_length"] = max_length;
  j["stop_probability"] = stop_probability;
  j["concentration"] = concentration;
  j["spread_probability"] = spread_probability;
  auto regions_json = nlohmann::ordered_json::array();
  for (const auto& r : regions) {
    nlohmann::ordered_json rj;
    rj["label"] = r.label;
    if (!r.alphabet.empty()) rj["alphabet"] = r.alphabet;
    auto cj = nlohmann::ordered_json::array();
    for (const auto& c : r.countries) cj.push_back({{"code", c.code}, {"volume", c.volume}});
    rj["countries"] = cj;
    regions_json.push_back(rj);
  }
  j["regions"] = regions_json;
  auto pops = nlohmann::ordered_json::array();
  for (const auto& p : populations) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["size"] = p.size;
    pj["mix"] = p.mix;
    pops.push_back(pj);
  }
  j["populations"] = pops;
  return j.dump(2) + "\n";
}

SynthSpec SynthSpec::from_json(std::string_view text, const std::string& source) {
  try {
    const auto j = nlohmann::json::parse(text);
    const std::uint64_t seed = j.value("seed", std::uint64_t{1});
    const double overlap = j.value("overlap", 0.3);
    const std::size_t names = j.value("names_per_country", std::size_t{500});
    SynthSpec spec = SynthSpec::uniform(j.value("n_regions", std::size_t{7}),
                                        j.value("countries_per_region", std::size_t{3}), names,
                                        overlap, seed);
    spec.chain_order = j.value("chain_order", spec.chain_order);
    spec.alphabet = j.value("alphabet", spec.alphabet);
    spec.min_length = j.value("min_length", spec.min_length);
    spec.max_length = j.value("max_length", spec.max_length);
    spec.stop_probability = j.value("stop_probability", spec.stop_probability);
    spec.concentration = j.value("concentration", spec.concentration);
    spec.spread_probability = j.value("spread_probability", spec.spread_probability);
    if (j.contains("regions")) {
      spec.regions.clear();
      for (const auto& rj : j.at("regions")) {
        RegionSpec r;
        r.label = rj.at("label").get<std::string>();
        r.alphabet = rj.value("alphabet", std::string());
        for (const auto& cj : rj.at("countries")) {
          r.countries.push_back({cj.at("code").get<std::string>(), cj.value("volume", 1.0)});
        }
        spec.regions.push_back(std::move(r));
      }
      if (!j.contains("populations")) spec.populations.clear();
    }
    if (j.contains("populations")) {
      spec.populations.clear();
      for (const auto& pj : j.at("populations")) {
        PopulationSpec p;
        p.name = pj.at("name").get<std::string>();
        p.size = pj.value("size", std::size_t{2000});
        p.mix = pj.at("mix").get<std::map<std::string, double>>();
        spec.populations.push_back(std::move(p));
      }
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source + ": malformed synthetic spec: " + e.what());
  }
}

SynthCorpus generate(const SynthSpec& spec) {
  spec.validate();
  const std::u32string alphabet = to_u32(spec.alphabet);

  Rng chain_rng(derive_seed(spec.seed, Stream::synth_chain));
  const RegionGenerator global = build_chain(chain_rng, "global", alphabet, alphabet, spec);
  std::vector<RegionGenerator> chains;
  for (const auto& r : spec.regions) {
    const std::u32string allowed = r.alphabet.empty() ? alphabet : to_u32(r.alphabet);
    chains.push_back(
        build_chain(chain_rng, r.label, alphabet, allowed, spec).mixed_with(global, spec.overlap));
  }

  std::vector<std::string> all_countries;
  for (const auto& r : spec.regions) {
    for (const auto& c : r.countries) all_countries.push_back(c.code);
  }

  SynthCorpus out;
  std::unordered_set<std::string> seen;
  corpus::OccurrenceTable::Builder builder;
  const std::uint64_t corpus_seed = derive_seed(spec.seed, Stream::synth_corpus);
  std::size_t country_counter = 0;
  for (std::size_t r = 0; r < spec.regions.size(); ++r) {
    const auto& region = spec.regions[r];
    out.regions.push_back(region.label);
    for (const auto& country : region.countries) {
      out.country_region[country.code] = region.label;
      Rng rng(derive_seed(corpus_seed, country_counter++));
      for (std::size_t i = 0; i < spec.names_per_country; ++i) {
        std::string name = draw_unique(chains[r], rng, seen);
        const double u = 1.0 - rng.uniform01();  // (0, 1]
        const auto count = 1 + static_cast<std::uint64_t>(-std::log(u) * 3.0 * country.volume);
        builder.add(name, country.code, count);
        if (rng.uniform01() < spec.spread_probability && all_countries.size() > 1) {
          std::string other = country.code;
          while (other == country.code) {
            other = all_countries[rng.uniform_index(all_countries.size())];
          }
          builder.add(name, other, 1);
        }
        out.truth.emplace(std::move(name), region.label);
      }
    }
  }
  out.table = std::move(builder).build();
  std::sort(out.regions.begin(), out.regions.end());

  const std::uint64_t pop_seed = derive_seed(spec.seed, Stream::synth_population);
  for (std::size_t p = 0; p < spec.populations.size(); ++p) {
    const auto& ps = spec.populations[p];
    Rng rng(derive_seed(pop_seed, p));
    double total_w = 0.0;
    for (const auto& [label, w] : ps.mix) total_w += w;

    // Largest-remainder apportionment, ties by region order.
    std::vector<std::size_t> quota(spec.regions.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t r = 0; r < spec.regions.size(); ++r) {
      auto it = ps.mix.find(spec.regions[r].label);
      const double w = it == ps.mix.end() ? 0.0 : it->second;
      const double exact = static_cast<double>(ps.size) * w / total_w;
      quota[r] = static_cast<std::size_t>(std::floor(exact));
      assigned += quota[r];
      remainders.emplace_back(exact - std::floor(exact), r);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < ps.size; ++i, ++assigned) ++quota[remainders[i].second];

    Population pop;
    pop.name = ps.name;
    for (std::size_t r = 0; r < spec.regions.size(); ++r) {
      pop.true_proportions[spec.regions[r].label] =
          static_cast<double>(quota[r]) / static_cast<double>(ps.size);
      for (std::size_t i = 0; i < quota[r]; ++i) {
        pop.surnames.push_back(draw_unique(chains[r], rng, seen));
        pop.true_regions.push_back(spec.regions[r].label);
      }
    }
    std::vector<std::size_t> perm(pop.surnames.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(std::span<std::size_t>(perm));
    Population shuffled{pop.name, {}, {}, pop.true_proportions};
    for (std::size_t i : perm) {
      shuffled.surnames.push_back(pop.surnames[i]);
      shuffled.true_regions.push_back(pop.true_regions[i]);
    }
    out.populations.push_back(std::move(shuffled));
  }
  return out;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::ostringstream table;
  corpus::write_table(table, corpus.table);
  io::write_file(dir / "corpus.tsv", table.str());

  std::string truth;
  for (const auto& [name, region] : corpus.truth) truth += name + "\t" + region + "\n";
  io::write_file(dir / "truth.tsv", truth);

  std::string countries;
  for (const auto& [code, region] : corpus.country_region) {
    countries += code + "\t" + region + "\n";
  }
  io::write_file(dir / "countries.tsv", countries);

  for (const auto& p : corpus.populations) {
    std::string names;
    std::string labels;
    for (std::size_t i = 0; i < p.surnames.size(); ++i) {
      names += p.surnames[i] + "\n";
      labels += p.surnames[i] + "\t" + p.true_regions[i] + "\n";
    }
    io::write_file(dir / "populations" / (p.name + ".txt"), names);
    io::write_file(dir / "populations" / (p.name + ".truth.tsv"), labels);
  }
}

std::string Scorecard::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["overlap"] = overlap;
  j["core_names"] = core_names;
  j["typology_exact"] = typology_exact;
  j["accuracy"] = accuracy;
  auto rj = nlohmann::ordered_json::array();
  for (const auto& r : regions) {
    rj.push_back({{"region", r.region},
                  {"precision", r.precision},
                  {"recall", r.recall},
                  {"support", r.support}});
  }
  j["regions"] = rj;
  j["population"] = population;
  j["raw_l1"] = raw_l1;
  j["corrected_l1"] = corrected_l1;
  j["evaluation"] = nlohmann::ordered_json::parse(eval.to_json());
  return j.dump(2) + "\n";
}

Scorecard score_pipeline(const SynthSpec& spec, const pipeline::PipelineConfig& config,
                         bool true_typology) {
  if (spec.populations.empty()) {
    throw ConfigError("scoring needs at least one held-out population in the spec");
  }
  const SynthCorpus sc = generate(spec);

  pipeline::PipelineConfig cfg = config;
  cfg.seed = spec.seed;
  cfg.k_regions = sc.regions.size();
  cfg.anchors.clear();
  for (const auto& r : spec.regions) cfg.anchors[r.label] = r.countries.front().code;

  pipeline::ModelStages stages;
  if (true_typology) {
    typology::RegionTypology t;
    t.regions = sc.regions;
    for (const auto& [code, region] : sc.country_region) t.assignment[code] = region;
    stages = pipeline::build_model_with_typology(sc.table, cfg, std::move(t));
  } else {
    stages = pipeline::build_model(sc.table, cfg, {});
  }

  Scorecard card;
  card.seed = spec.seed;
  card.overlap = spec.overlap;
  card.core_names = stages.core_names.size();
  card.eval = stages.eval;

  // Same partition of the clustered countries, labels aside.
  std::map<std::string, std::set<std::string>> found;
  std::map<std::string, std::set<std::string>> expected;
  for (const auto& country : stages.matrix.countries) {
    const auto& assigned = stages.typology.assignment.at(country);
    found[assigned ? *assigned : std::string(typology::kDeleted)].insert(country);
    expected[sc.country_region.at(country)].insert(country);
  }
  std::set<std::set<std::string>> found_parts;
  std::set<std::set<std::string>> expected_parts;
  for (auto& [label, members] : found) found_parts.insert(members);
  for (auto& [label, members] : expected) expected_parts.insert(members);
  card.typology_exact = true_typology || found_parts == expected_parts;

  // Ground-truth scoring of the evaluation split.
  std::vector<std::string> eval_names;
  for (const auto& n : stages.split.eval) eval_names.push_back(n.surname);
  const auto guessed = classifier::classify_labels(stages.model, eval_names);
  std::map<std::string, std::size_t> hits;
  std::map<std::string, std::size_t> actual_total;
  std::map<std::string, std::size_t> guessed_total;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < eval_names.size(); ++i) {
    const std::string& truth = sc.truth.at(eval_names[i]);
    const std::string& guess = stages.model.regions()[guessed[i]];
    ++actual_total[truth];
    ++guessed_total[guess];
    if (guess == truth) {
      ++hits[truth];
      ++correct;
    }
  }
  for (const auto& region : sc.regions) {
    RegionScore rs;
    rs.region = region;
    rs.support = actual_total[region];
    rs.recall = rs.support > 0 ? static_cast<double>(hits[region]) / rs.support : 0.0;
    const std::size_t g = guessed_total[region];
    rs.precision = g > 0 ? static_cast<double>(hits[region]) / g : 0.0;
    card.regions.push_back(rs);
  }
  card.accuracy =
      eval_names.empty() ? 0.0 : static_cast<double>(correct) / eval_names.size();

  const Population& pop = sc.populations.front();
  card.population = pop.name;
  const auto cal = pipeline::calibrate(stages.eval, stages.model, pop.surnames, cfg.normalize);
  const auto dist = diversity::distribution(pop.name, pop.surnames, stages.model, cal.op,
                                            cfg.normalize);
  std::set<std::string> labels(sc.regions.begin(), sc.regions.end());
  labels.insert(stages.model.regions().begin(), stages.model.regions().end());
  for (const auto& label : labels) {
    const auto truth_it = pop.true_proportions.find(label);
    const double truth = truth_it == pop.true_proportions.end() ? 0.0 : truth_it->second;
    const std::size_t r = stages.model.region_index(label);
    double raw = 0.0;
    double corrected = 0.0;
    if (r < stages.model.regions().size()) {
      raw = dist.guessed[r] / static_cast<double>(dist.n_names);
      corrected = dist.proportions[r];
    }
    card.raw_l1 += std::abs(raw - truth);
    card.corrected_l1 += std::abs(corrected - truth);
  }
  return card;
}

}  // namespace onoma::synth
