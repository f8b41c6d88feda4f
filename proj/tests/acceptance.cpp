// Acceptance runner: one PASS/FAIL line per criterion, with wall time.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "onoma/classifier.hpp"
#include "onoma/corpus.hpp"
#include "onoma/correction.hpp"
#include "onoma/diversity.hpp"
#include "onoma/pipeline.hpp"
#include "onoma/synth.hpp"
#include "onoma/typology.hpp"
#include "oracles.hpp"

using namespace onoma;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(budget_s) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s  %.3f s  %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << std::fixed << v;
  return s.str();
}

Outcome table_fixture() {
  std::ifstream in(std::string(ONOMA_DATA_DIR) + "/reference_confusion.csv");
  if (!in) return {false, "fixture missing"};
  const auto c = correction::read_confusion_csv(in, "reference_confusion.csv");
  const auto r = classifier::report_from_confusion(c.regions, c.matrix);
  const std::vector<double> precision{.43, .52, .61, .81, .63, .78, .64};
  const std::vector<double> recall{.61, .72, .77, .71, .72, .62, .84};
  int bad = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    bad += std::abs(std::round(r.precision[i] * 100) - precision[i] * 100) > 0.5;
    bad += std::abs(std::round(r.recall[i] * 100) - recall[i] * 100) > 0.5;
  }
  return {bad == 0, std::to_string(14 - bad) + "/14 values match"};
}

Outcome nb_oracle() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t k = 2 + seed % 4;
    std::vector<classifier::LabeledName> train;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::set<std::string> seen;
    const std::size_t per = 1 + seed % 12;
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t i = 0; i < per; ++i) {
        auto w = oracle::random_word(rng, seed % 2 ? "abc" : "ab", 1, 5);
        if (!seen.insert(w).second) continue;
        const std::string region = "R" + std::to_string(r);
        train.push_back({w, region});
        pairs.push_back({w, region});
      }
    }
    features::NGramConfig f;
    f.n_values = {2};
    const double alpha = 0.05 + 0.1 * double(seed % 5);
    const auto m = classifier::train(train, {alpha, f});
    const oracle::NB nb(pairs, alpha, {2}, true);
    if (m.regions() != nb.regions || m.vocabulary().size() != nb.vocab.size()) {
      return {false, "model shape differs at seed " + std::to_string(seed)};
    }
    if (m.vocabulary().size() > 20 || train.size() > 50) {
      return {false, "instance generator exceeded its bounds"};
    }
    for (int i = 0; i < 20; ++i) {
      const auto w = oracle::random_word(rng, "abcd", 1, 7);
      const auto got = classifier::classify(m, w).scores;
      const auto want = nb.scores(w);
      for (std::size_t r = 0; r < want.size(); ++r) worst = std::max(worst, std::abs(got[r] - want[r]));
    }
  }
  return {worst <= 1e-9, "max |diff| = " + sci(worst)};
}

Outcome ward_oracle() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const std::size_t dim = 1 + trial % 4;
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    typology::CountryFeatureMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
      m.countries.push_back("P" + std::to_string(i));
      m.core_name_counts.push_back(1);
      for (auto& x : pts[i]) x = u(rng);
      m.cells.insert(m.cells.end(), pts[i].begin(), pts[i].end());
    }
    for (std::size_t d = 0; d < dim; ++d) m.columns.push_back("d" + std::to_string(d));
    const auto got = typology::ward_cluster(m);
    const auto want = oracle::ward(pts);
    for (std::size_t s = 0; s < want.size(); ++s) {
      if (got.merges[s].node_a != want[s].a || got.merges[s].node_b != want[s].b) {
        return {false, "merge order differs in trial " + std::to_string(trial)};
      }
      worst = std::max(worst, std::abs(got.merges[s].height - want[s].height));
    }
  }
  return {worst <= 1e-9, "max height diff = " + sci(worst)};
}

Outcome hhi_oracle() {
  const std::vector<std::string> cc{"FR", "DE", "IT", "ES", "JP", "PL", "CN"};
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 rng(1000 + trial);
    std::vector<oracle::Record> rows;
    const std::size_t n = 1 + rng() % 1000;
    const std::size_t nc = 2 + trial % 6;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({oracle::random_word(rng, "abc", 1, 4), cc[rng() % nc], 1 + rng() % 30});
    }
    corpus::OccurrenceTable::Builder b;
    for (const auto& r : rows) b.add(r.surname, r.country, r.count);
    const auto table = std::move(b).build();
    corpus::FilterOptions opts;
    opts.hhi_min = trial % 2 ? 0.8 : 0.5;
    opts.freq_min = trial % 3 ? 1e-6 : 0.01;
    const auto got = corpus::filter_core_names(table, opts);
    const auto want = oracle::core_names(rows, opts.hhi_min, opts.freq_min);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].surname == want[i].surname && got[i].assigned_country == want[i].country &&
             got[i].hhi == want[i].hhi && got[i].max_frequency == want[i].max_frequency;
    }
    if (!same) return {false, "mismatch in trial " + std::to_string(trial)};
  }
  return {true, "100/100 tables identical"};
}

Outcome correction_algebra() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  double row_err = 0.0, mass_err = 0.0, share_err = 0.0;
  bool exact = true;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 7;
    correction::ConfusionCounts c;
    for (std::size_t i = 0; i < k; ++i) c.regions.push_back("R" + std::to_string(i));
    c.matrix.assign(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) c.matrix[i][j] = u(rng) + (i == j ? 200.0 : 0.0);
    std::vector<double> p(k);
    double s = 0.0;
    for (auto& x : p) s += (x = 0.05 + u(rng));
    for (auto& x : p) x /= s;
    const auto w = correction::reweight_priors(c, p);
    const auto cols = w.column_sums();
    for (std::size_t j = 0; j < k; ++j) share_err = std::max(share_err, std::abs(cols[j] / w.total() - p[j]));
    const auto op = correction::correction_operator(w);
    for (const auto& row : op.matrix) {
      double rs = 0.0;
      for (double x : row) rs += x;
      row_err = std::max(row_err, std::abs(rs - 1.0));
    }
    std::vector<double> g(k);
    double total = 0.0;
    for (auto& x : g) total += (x = u(rng) * 10);
    double out = 0.0;
    for (double x : correction::correct_counts(g, op)) out += x;
    mass_err = std::max(mass_err, std::abs(out - total) / total);

    const auto id = correction::CorrectionOperator::identity(c.regions);
    exact = exact && correction::correct_counts(g, id) == g;
    std::vector<double> own = c.column_sums();
    for (auto& x : own) x /= c.total();
    const auto fixed = correction::reweight_priors(c, own);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        exact = exact && std::abs(fixed.matrix[i][j] - c.matrix[i][j]) <= 1e-12 * c.total();
  }
  correction::ConfusionCounts two{{"A", "B"}, {{8, 2}, {2, 8}}};
  const auto w = correction::reweight_priors(two, std::vector<double>{0.9, 0.1});
  exact = exact && std::abs(w.matrix[0][0] - 14.4) < 1e-12 && std::abs(w.matrix[1][1] - 1.6) < 1e-12;
  const bool ok = row_err <= 1e-9 && mass_err <= 1e-9 && share_err <= 1e-9 && exact;
  return {ok, "row " + sci(row_err) + ", mass " + sci(mass_err) +
                  ", shares " + sci(share_err) + (exact ? ", exact cases ok" : ", exact cases FAILED")};
}

Outcome synthetic_end_to_end() {
  pipeline::PipelineConfig cfg;
  cfg.seed = 1;
  std::map<std::string, double> recall_sum;
  int corrected_wins = 0, exact = 0;
  const int seeds = 10;
  for (int s = 1; s <= seeds; ++s) {
    const auto spec = synth::SynthSpec::uniform(7, 3, 500, 0.3, static_cast<std::uint64_t>(s));
    const auto card = synth::score_pipeline(spec, cfg);
    for (const auto& r : card.regions) recall_sum[r.region] += r.recall;
    corrected_wins += card.corrected_l1 <= card.raw_l1;
    exact += card.typology_exact;
  }
  double min_mean = 1.0;
  for (const auto& [r, v] : recall_sum) min_mean = std::min(min_mean, v / seeds);
  const bool ok = min_mean >= 0.7 && corrected_wins >= 8 && exact >= 8;
  return {ok, "(a) min per-region mean recall " + fmt(min_mean, 3) + ", (b) corrected <= raw in " +
                  std::to_string(corrected_wins) + "/10, (c) exact partition in " +
                  std::to_string(exact) + "/10"};
}

Outcome diversity_identities() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 1 + trial % 9;
    std::vector<double> p(k), q(k);
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = rng() % 4 == 0 ? 0.0 : u(rng);
      q[i] = rng() % 4 == 0 ? 0.0 : u(rng);
    }
    const double d = diversity::canberra(p, q);
    if (d != diversity::canberra(q, p) || d < 0.0 || (d == 0.0) != (p == q) ||
        diversity::canberra(p, p) != 0.0) {
      return {false, "Canberra property violated in trial " + std::to_string(trial)};
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    diversity::OriginDistribution d;
    d.dataset_name = "d";
    double s = 0.0;
    for (int r = 0; r < 7; ++r) {
      d.regions.push_back("R" + std::to_string(r));
      d.proportions.push_back(0.01 + u(rng));
      s += d.proportions.back();
    }
    for (auto& x : d.proportions) x /= s;
    for (const auto& v : diversity::representation_ratios(d, d).ratios) {
      if (!v || *v != 1.0) return {false, "self ratio differs from 1"};
    }
  }
  return {true, "1000 Canberra pairs, 200 self-comparisons"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "onoma_acceptance_det";
  fs::remove_all(dir);
  const std::vector<std::string> files{"model.json", "operator.csv", "report/ratios.csv",
                                       "report/distributions.csv", "report/report.json"};
  std::vector<std::string> first;
  for (const char* out : {"a", "b"}) {
    pipeline::PipelineConfig c;
    c.seed = 20240611;
    c.synth_spec = fs::path(ONOMA_DATA_DIR) / "examples" / "synth_spec.json";
    c.output_dir = dir / out;
    pipeline::run_pipeline(c);
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto text = slurp(dir / out / files[i]);
      if (text.empty()) return {false, files[i] + " is missing"};
      if (first.size() < files.size()) {
        first.push_back(text);
      } else if (text != first[i]) {
        return {false, files[i] + " differs between runs"};
      }
    }
  }
  fs::remove_all(dir);
  return {true, std::to_string(files.size()) + " files byte-identical"};
}

Outcome scale() {
  const auto dir = fs::temp_directory_path() / "onoma_acceptance_scale";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto spec = synth::SynthSpec::uniform(10, 5, 2000, 0.3, 99);
  std::ofstream(dir / "spec.json") << spec.to_json();
  pipeline::PipelineConfig c;
  c.seed = 99;
  c.synth_spec = dir / "spec.json";
  c.output_dir = dir / "out";
  pipeline::run_pipeline(c);
  const bool ok = fs::exists(dir / "out" / "report" / "report.json");
  fs::remove_all(dir);
  return {ok, "10 regions x 5 countries x 2000 names = 100000 names"};
}

}  // namespace

int main() {
  run(1, "Confusion fixture consistency", 1, table_fixture);
  run(2, "NB oracle equivalence", 10, nb_oracle);
  run(3, "Ward oracle equivalence", 10, ward_oracle);
  run(4, "HHI/filter oracle", 5, hhi_oracle);
  run(5, "Correction algebra", 1, correction_algebra);
  run(6, "Synthetic end-to-end", 120, synthetic_end_to_end);
  run(7, "Diversity identities", 1, diversity_identities);
  run(8, "Determinism", 120, determinism);
  run(9, "Scale sanity", 60, scale);
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
