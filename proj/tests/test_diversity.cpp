#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "onoma/diversity.hpp"
#include "onoma/error.hpp"
#include "oracles.hpp"

using namespace onoma;
using diversity::OriginDistribution;
using diversity::RepresentationProfile;

namespace {

OriginDistribution dist_of(std::string name, std::vector<double> proportions, std::size_t n = 1000) {
  OriginDistribution d;
  d.dataset_name = std::move(name);
  for (std::size_t i = 0; i < proportions.size(); ++i) d.regions.push_back("R" + std::to_string(i));
  d.proportions = proportions;
  for (double p : proportions) {
    d.counts.push_back(p * double(n));
    d.guessed.push_back(p * double(n));
  }
  d.n_names = n;
  return d;
}

RepresentationProfile profile(std::string name, std::vector<double> r) {
  RepresentationProfile p;
  p.dataset_name = std::move(name);
  for (std::size_t i = 0; i < r.size(); ++i) {
    p.regions.push_back("R" + std::to_string(i));
    p.ratios.push_back(r[i]);
  }
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("diversity") {
  TEST_CASE("canberra examples") {
    CHECK(diversity::canberra(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 2.0);
    CHECK(diversity::canberra(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
    CHECK(diversity::canberra(std::vector<double>{0, 0}, std::vector<double>{0, 0}) == 0.0);
    CHECK(diversity::canberra(std::vector<double>{1, 1}, std::vector<double>{2, 0.5}) ==
          doctest::Approx(1.0 / 3.0 + 1.0 / 3.0));
    CHECK(diversity::canberra(std::vector<double>{0.5, 1.5}, std::vector<double>{1.0, 0.5}) ==
          doctest::Approx(1.0 / 3.0 + 0.5).epsilon(1e-15));
    CHECK_THROWS_AS(diversity::canberra(std::vector<double>{1}, std::vector<double>{1, 2}),
                    InputError);
    CHECK_THROWS_AS(diversity::canberra(std::vector<double>{-1}, std::vector<double>{1}),
                    InputError);
  }

  TEST_CASE("canberra is a bounded semimetric on random vectors") {
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
      CHECK(d == diversity::canberra(q, p));
      CHECK(d >= 0.0);
      CHECK(d <= double(k));
      CHECK((d == 0.0) == (p == q));
      CHECK(diversity::canberra(p, p) == 0.0);
    }
  }

  TEST_CASE("ratios: self, doubling, zero target, zero reference") {
    const auto ref = dist_of("ref", {0.05, 0.45, 0.5, 0.0});
    const auto self = diversity::representation_ratios(ref, ref);
    CHECK(self.ratios[0] == 1.0);
    CHECK(self.ratios[1] == 1.0);
    CHECK(self.ratios[2] == 1.0);
    CHECK_FALSE(self.ratios[3].has_value());
    const auto t = dist_of("t", {0.10, 0.9, 0.0, 0.0});
    const auto r = diversity::representation_ratios(t, ref);
    CHECK(*r.ratios[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(*r.ratios[2] == 0.0);
    CHECK_FALSE(r.ratios[3].has_value());
    CHECK(diversity::defined_ratios(r)[3] == 0.0);
    CHECK_THROWS_AS(diversity::representation_ratios(dist_of("x", {1.0}), ref), InputError);
  }

  TEST_CASE("self-comparison gives exactly 1 for random populations") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> p(7);
      double s = 0.0;
      for (auto& x : p) s += (x = u(rng));
      for (auto& x : p) x /= s;
      const auto d = dist_of("d", p);
      for (const auto& v : diversity::representation_ratios(d, d).ratios) CHECK(*v == 1.0);
    }
  }

  TEST_CASE("identical profiles merge first and order is input-independent") {
    std::vector<RepresentationProfile> ps{profile("c", {3.0, 0.1}), profile("a", {1.0, 1.0}),
                                          profile("b", {1.0, 1.0}), profile("d", {0.2, 2.5})};
    const auto o = diversity::order_profiles(ps);
    REQUIRE(o.tree.merges.size() == 3);
    CHECK(o.tree.merges[0].node_a == 0);
    CHECK(o.tree.merges[0].node_b == 1);
    CHECK(o.tree.merges[0].height == 0.0);
    std::reverse(ps.begin(), ps.end());
    const auto o2 = diversity::order_profiles(ps);
    std::vector<std::string> n1, n2;
    for (const auto& p : o.profiles) n1.push_back(p.dataset_name);
    for (const auto& p : o2.profiles) n2.push_back(p.dataset_name);
    CHECK(n1 == n2);
  }

  TEST_CASE("profile tree equals the average-linkage oracle under Canberra") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + trial % 7;
      std::vector<RepresentationProfile> ps;
      std::vector<std::vector<double>> raw;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> r(5);
        for (auto& x : r) x = u(rng);
        raw.push_back(r);
        ps.push_back(profile("p" + std::to_string(i), r));  // names already sorted for n <= 10
      }
      std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i][j] = diversity::canberra(raw[i], raw[j]);
      const auto got = diversity::order_profiles(ps);
      const auto want = oracle::average(dist);
      REQUIRE(got.tree.merges.size() == want.size());
      for (std::size_t s = 0; s < want.size(); ++s) {
        CHECK(got.tree.merges[s].node_a == want[s].a);
        CHECK(got.tree.merges[s].node_b == want[s].b);
        CHECK(std::abs(got.tree.merges[s].height - want[s].height) <= 1e-9);
      }
    }
  }

  TEST_CASE("single profile: no tree") {
    const auto o = diversity::order_profiles({profile("only", {1.0, 2.0})});
    CHECK(o.profiles.size() == 1);
    CHECK(o.tree.merges.empty());
    CHECK(diversity::order_regions(o.profiles) == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("small expected counts are flagged") {
    const auto ref = dist_of("ref", {0.001, 0.999}, 1000);
    const auto t = dist_of("t", {0.5, 0.5}, 1000);
    CHECK(diversity::small_count_warnings(t, ref) == std::vector<std::string>{"R0"});
    const auto big = dist_of("t", {0.5, 0.5}, 10000);
    CHECK(diversity::small_count_warnings(big, ref).empty());
  }

  TEST_CASE("distribution with the identity operator equals raw tallies") {
    std::vector<classifier::LabeledName> train{{"aaa", "A"}, {"aab", "A"}, {"xxx", "B"}, {"xxy", "B"}};
    const auto m = classifier::train(train);
    const auto id = correction::CorrectionOperator::identity(m.regions());
    const std::vector<std::string> pop{"Aaa", "aaa", "xxx", "qqq"};
    const auto d = diversity::distribution("pop", pop, m, id);
    CHECK(d.n_names == 4);
    CHECK(d.n_prior_only == 1);
    CHECK(d.counts == d.guessed);
    CHECK(d.guessed[0] + d.guessed[1] == 4.0);
    CHECK(d.proportions[0] + d.proportions[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(diversity::distribution("e", std::vector<std::string>{}, m, id), InputError);
    const auto other = correction::CorrectionOperator::identity({"A", "C"});
    CHECK_THROWS_AS(diversity::distribution("pop", pop, m, other), InputError);
  }

  TEST_CASE("report files") {
    const auto dir = std::filesystem::temp_directory_path() / "onoma_report_test";
    std::filesystem::remove_all(dir);
    const auto ref = dist_of("ref", {0.25, 0.75});
    const auto t = dist_of("t", {0.5, 0.5});
    std::vector<RepresentationProfile> ps{diversity::representation_ratios(ref, ref),
                                          diversity::representation_ratios(t, ref)};
    const auto ordering = diversity::order_profiles(ps);
    const std::vector<OriginDistribution> ds{ref, t};
    diversity::ReportProvenance prov;
    prov.model_sha256 = "abc";
    prov.reference_name = "ref";
    const auto files = diversity::emit_report(ordering, ds, ref, prov, dir);
    const auto ratios = slurp(files.ratios_csv);
    CHECK(ratios.rfind("dataset,", 0) == 0);
    CHECK(ratios.find("ref,1,1\n") != std::string::npos);
    CHECK(ratios.find("t,") != std::string::npos);
    CHECK(slurp(files.distributions_csv).find("guessed:R0") != std::string::npos);
    const auto bundle = slurp(files.bundle_json);
    CHECK(bundle.find("\"metric\": \"canberra\"") != std::string::npos);
    CHECK(bundle.find("\"model_sha256\": \"abc\"") != std::string::npos);
    std::filesystem::remove_all(dir);
  }
}
