#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "onoma/cluster.hpp"
#include "onoma/error.hpp"
#include "onoma/typology.hpp"
#include "oracles.hpp"

using namespace onoma;

namespace {

typology::CountryFeatureMatrix points_matrix(const std::vector<std::vector<double>>& pts) {
  typology::CountryFeatureMatrix m;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m.countries.push_back("P" + std::to_string(i));
    m.core_name_counts.push_back(1);
  }
  for (std::size_t d = 0; d < pts[0].size(); ++d) m.columns.push_back("d" + std::to_string(d));
  for (const auto& p : pts) m.cells.insert(m.cells.end(), p.begin(), p.end());
  return m;
}

corpus::CoreName core(std::string s, std::string c) {
  return {std::move(s), std::move(c), 1.0, 1.0};
}

}  // namespace

TEST_SUITE("cluster") {
  TEST_CASE("two rows merge once at their Euclidean distance") {
    const auto d = typology::ward_cluster(points_matrix({{0.0, 0.0}, {3.0, 4.0}}));
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].height == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(d.merges[0].new_node == 2);
    CHECK(d.merges[0].size == 2);
  }

  TEST_CASE("collinear 0, 1, 10: first merge joins 0 and 1 at height 1") {
    const auto d = typology::ward_cluster(points_matrix({{0.0}, {1.0}, {10.0}}));
    REQUIRE(d.merges.size() == 2);
    CHECK(d.merges[0].node_a == 0);
    CHECK(d.merges[0].node_b == 1);
    CHECK(d.merges[0].height == doctest::Approx(1.0));
    // Ward: sqrt(2*2*1/3) * |0.5 - 10|
    CHECK(d.merges[1].height == doctest::Approx(std::sqrt(4.0 / 3.0) * 9.5).epsilon(1e-12));
  }

  TEST_CASE("equal distances break on the smallest node pair") {
    // unit square: four equal sides
    const auto d = typology::ward_cluster(points_matrix({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    CHECK(d.merges[0].node_a == 0);
    CHECK(d.merges[0].node_b == 1);
    CHECK(d.merges[1].node_a == 2);
    CHECK(d.merges[1].node_b == 3);
  }

  TEST_CASE("Ward equals the centroid oracle and heights are monotone") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + trial % 9;
      const std::size_t dim = 1 + trial % 4;
      std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
      for (auto& p : pts)
        for (auto& x : p) x = u(rng);
      const auto got = typology::ward_cluster(points_matrix(pts));
      const auto want = oracle::ward(pts);
      REQUIRE(got.merges.size() == want.size());
      for (std::size_t s = 0; s < want.size(); ++s) {
        CHECK(got.merges[s].node_a == want[s].a);
        CHECK(got.merges[s].node_b == want[s].b);
        CHECK(std::abs(got.merges[s].height - want[s].height) <= 1e-9);
        if (s > 0) CHECK(got.merges[s].height >= got.merges[s - 1].height - 1e-12);
      }
      CHECK_NOTHROW(got.validate());
    }
  }

  TEST_CASE("average linkage equals the pairwise-mean oracle") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + trial % 8;
      std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
      cluster::DistanceMatrix m{n, std::vector<double>(n * n, 0.0)};
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = m(i, j) = m(j, i) = u(rng);
      const auto got = cluster::agglomerate(m, cluster::Linkage::average,
                                            std::vector<std::string>(n, "x"));
      const auto want = oracle::average(dist);
      for (std::size_t s = 0; s < want.size(); ++s) {
        CHECK(got.merges[s].node_a == want[s].a);
        CHECK(got.merges[s].node_b == want[s].b);
        CHECK(std::abs(got.merges[s].height - want[s].height) <= 1e-9);
      }
    }
  }

  TEST_CASE("non-finite input is rejected") {
    cluster::DistanceMatrix m{2, {0.0, NAN, NAN, 0.0}};
    CHECK_THROWS_AS(cluster::agglomerate(m, cluster::Linkage::ward, {"a", "b"}), InputError);
    CHECK_THROWS_AS(typology::ward_cluster(points_matrix({{0.0}, {INFINITY}})), InputError);
  }

  TEST_CASE("cut yields k groups numbered by smallest leaf") {
    const auto d = typology::ward_cluster(points_matrix({{0.0}, {10.0}, {0.5}, {10.5}, {30.0}}));
    CHECK(cluster::cut(d, 1) == std::vector<std::size_t>{0, 0, 0, 0, 0});
    CHECK(cluster::cut(d, 3) == std::vector<std::size_t>{0, 1, 0, 1, 2});
    CHECK(cluster::cut(d, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto c = cluster::cut(d, k);
      CHECK(std::set<std::size_t>(c.begin(), c.end()).size() == k);
    }
  }

  TEST_CASE("leaf order lists every leaf once, merged pairs adjacent") {
    const auto d = typology::ward_cluster(points_matrix({{0.0}, {10.0}, {0.5}, {10.5}}));
    const auto order = cluster::leaf_order(d);
    CHECK(order == std::vector<std::size_t>{0, 2, 1, 3});
  }

  TEST_CASE("dendrogram export format") {
    const auto d = typology::ward_cluster(points_matrix({{0.0, 0.0}, {3.0, 4.0}}));
    std::ostringstream out;
    cluster::write_dendrogram(out, d);
    CHECK(out.str() == "# leaf\t0\tP0\n# leaf\t1\tP1\n0\t1\t5\t2\n");
  }

  TEST_CASE("parallel and serial distances agree exactly") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> rows(37 * 11);
    for (auto& x : rows) x = u(rng);
    const auto a = cluster::euclidean_distances(rows, 37, 11);
    const auto b = cluster::euclidean_distances_serial(rows, 37, 11);
    CHECK(a.values == b.values);
  }
}

TEST_SUITE("typology") {
  TEST_CASE("country matrix needs two eligible countries") {
    std::vector<corpus::CoreName> one{core("ab", "FR")};
    features::NGramConfig c;
    c.n_values = {2};
    c.pad_boundaries = false;
    CHECK_THROWS_AS(typology::build_country_matrix(one, c, 1), InputError);
  }

  TEST_CASE("disjoint bigrams give unit rows") {
    std::vector<corpus::CoreName> names{core("aa", "AA"), core("bb", "BB")};
    features::NGramConfig c;
    c.n_values = {2};
    c.pad_boundaries = false;
    // registry codes are not checked here
    const auto m = typology::build_country_matrix(names, c, 1);
    CHECK(m.countries == std::vector<std::string>{"AA", "BB"});
    CHECK(m.columns == std::vector<std::string>{"aa", "bb"});
    CHECK(m.cells == std::vector<double>{1.0, 0.0, 0.0, 1.0});
  }

  TEST_CASE("rows are normalized n-gram frequencies") {
    // x appears 3 times, y once for country FR
    std::vector<corpus::CoreName> names{core("xxxx", "FR"), core("yy", "FR"), core("zz", "DE")};
    features::NGramConfig c;
    c.n_values = {2};
    c.pad_boundaries = false;
    const auto m = typology::build_country_matrix(names, c, 1);
    // columns xx, yy, zz; FR row [0.75, 0.25, 0]
    CHECK(m.countries == std::vector<std::string>{"DE", "FR"});
    const auto fr = m.row(1);
    CHECK(fr[0] == 0.75);
    CHECK(fr[1] == 0.25);
    CHECK(fr[2] == 0.0);
  }

  TEST_CASE("countries below min_core_names are left out") {
    std::vector<corpus::CoreName> names{core("ab", "FR"), core("ac", "FR"), core("bd", "DE"),
                                        core("be", "DE"), core("zz", "IT")};
    const auto m = typology::build_country_matrix(names, features::NGramConfig{}, 2);
    CHECK(m.countries == std::vector<std::string>{"DE", "FR"});
    CHECK(m.core_name_counts == std::vector<std::size_t>{2, 2});
    for (std::size_t r = 0; r < m.rows(); ++r) {
      double s = 0.0;
      for (double v : m.row(r)) s += v;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  cluster::Dendrogram six_countries() {
    typology::CountryFeatureMatrix m;
    m.countries = {"CN", "DE", "FR", "IT", "JP", "RU"};
    m.columns = {"x"};
    m.cells = {0.0, 10.0, 10.2, 10.4, 0.3, 20.0};
    m.core_name_counts = {5, 9, 3, 4, 1, 2};
    return typology::ward_cluster(m);
  }

  TEST_CASE("degenerate cuts") {
    const auto d = six_countries();
    typology::NamingOptions naming;
    naming.weights = {{"CN", 5}, {"DE", 9}, {"FR", 3}, {"IT", 4}, {"JP", 1}, {"RU", 2}};
    const auto all = typology::cut_dendrogram(d, 1, {}, naming);
    CHECK(all.regions.size() == 1);
    CHECK(all.regions[0] == "cluster-DE");  // largest member by weight
    CHECK(typology::cut_dendrogram(d, 1, {}).regions[0] == "cluster-CN");  // no weights: lowest code
    const auto each = typology::cut_dendrogram(d, 6, {});
    CHECK(each.regions.size() == 6);
    CHECK(each.assignment.at("JP").value() == "cluster-JP");
    CHECK_THROWS_AS(typology::cut_dendrogram(d, 0, {}), ConfigError);
    CHECK_THROWS_AS(typology::cut_dendrogram(d, 7, {}), ConfigError);
  }

  TEST_CASE("anchors name clusters, overrides apply in order") {
    const auto d = six_countries();
    typology::NamingOptions naming;
    naming.anchors = {{"East", "CN"}, {"West", "FR"}, {"North", "RU"}};
    std::vector<typology::Override> ov{{typology::Override::Kind::reassign, "IT", "North"},
                                       {typology::Override::Kind::remove, "DE", ""}};
    const auto t = typology::cut_dendrogram(d, 3, ov, naming);
    CHECK(t.regions == std::vector<std::string>{"East", "North", "West"});
    CHECK(t.assignment.at("FR").value() == "West");
    CHECK(t.assignment.at("JP").value() == "East");
    CHECK(t.assignment.at("IT").value() == "North");
    CHECK_FALSE(t.assignment.at("DE").has_value());
    CHECK(t.overrides.size() == 2);
  }

  TEST_CASE("override errors") {
    const auto d = six_countries();
    using K = typology::Override::Kind;
    std::vector<typology::Override> unknown_country{{K::remove, "ZZ", ""}};
    CHECK_THROWS_AS(typology::cut_dendrogram(d, 3, unknown_country), ConfigError);
    std::vector<typology::Override> unknown_region{{K::reassign, "DE", "Atlantis"}};
    CHECK_THROWS_AS(typology::cut_dendrogram(d, 3, unknown_region), ConfigError);
    std::vector<typology::Override> emptied{{K::remove, "RU", ""}};
    CHECK_THROWS_AS(typology::cut_dendrogram(d, 3, emptied), ConfigError);
  }

  TEST_CASE("published overrides list") {
    const auto ov = typology::published_overrides();
    REQUIRE(ov.size() == 9);
    std::set<std::string> deleted;
    std::map<std::string, std::string> moved;
    for (const auto& o : ov) {
      if (o.kind == typology::Override::Kind::remove) deleted.insert(o.country);
      else moved[o.country] = o.region;
    }
    CHECK(deleted == std::set<std::string>{"AM", "JM", "MG", "PG", "TD"});
    CHECK(moved == std::map<std::string, std::string>{
                       {"ET", "African"}, {"ID", "Asian"}, {"JP", "Asian"}, {"PH", "Asian"}});
  }

  TEST_CASE("override file parsing") {
    std::istringstream in("# comment\nREASSIGN\tPH\tAsian\n\nDELETE\tPG\n");
    const auto ov = typology::read_overrides(in, "ov.tsv");
    REQUIRE(ov.size() == 2);
    CHECK(ov[0].region == "Asian");
    CHECK(ov[1].kind == typology::Override::Kind::remove);
    std::istringstream bad("MOVE\tPH\tAsian\n");
    CHECK_THROWS_AS(typology::read_overrides(bad, "ov.tsv"), InputError);
  }

  TEST_CASE("relabel maps, drops deleted and lists uncovered countries") {
    typology::RegionTypology t;
    t.regions = {"R"};
    t.assignment = {{"FR", "R"}, {"DE", std::nullopt}};
    std::vector<corpus::CoreName> names{core("a", "FR"), core("b", "DE"), core("c", "FR")};
    const auto r = typology::relabel(names, t);
    CHECK(r.names.size() == 2);
    CHECK(r.dropped == 1);
    CHECK(r.per_region.at("R") == 2);
    std::vector<corpus::CoreName> stray{core("a", "FR"), core("x", "IT"), core("y", "ES")};
    try {
      typology::relabel(stray, t);
      FAIL("expected an error");
    } catch (const InputError& e) {
      const std::string what = e.what();
      CHECK(what.find("IT") != std::string::npos);
      CHECK(what.find("ES") != std::string::npos);
    }
  }

  TEST_CASE("typology and labeled files round trip") {
    typology::RegionTypology t;
    t.regions = {"A", "B"};
    t.assignment = {{"FR", "A"}, {"DE", "B"}, {"IT", std::nullopt}};
    std::stringstream s;
    typology::write_typology(s, t);
    const auto back = typology::read_typology(s, "t.tsv");
    CHECK(back.regions == t.regions);
    CHECK(back.assignment == t.assignment);

    std::vector<typology::LabeledName> names{{"van der berg", "A"}, {"li", "B"}};
    std::stringstream l;
    typology::write_labeled(l, names);
    const auto lb = typology::read_labeled(l, "l.tsv");
    REQUIRE(lb.size() == 2);
    CHECK(lb[0].surname == "van der berg");
  }
}
