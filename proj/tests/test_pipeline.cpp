#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "onoma/error.hpp"
#include "onoma/pipeline.hpp"

using namespace onoma;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* small_spec =
    "{\"n_regions\": 3, \"countries_per_region\": 2, \"names_per_country\": 120,"
    " \"overlap\": 0.2}";

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config parsing resolves paths and rejects unknown keys") {
    const auto c = pipeline::PipelineConfig::from_json(
        "{\"corpus\": \"c.tsv\", \"seed\": 5, \"n_values\": [1, 2], \"hhi_basis\": \"count\"}",
        "/base", "cfg.json");
    CHECK(c.corpus == fs::path("/base/c.tsv"));
    CHECK(*c.seed == 5);
    CHECK(c.features.n_values == std::vector<int>{1, 2});
    CHECK(c.filter.basis == corpus::ShareBasis::count);
    CHECK_NOTHROW(c.validate());
    CHECK_THROWS_AS(pipeline::PipelineConfig::from_json("{\"sede\": 1}", ".", "cfg.json"),
                    ConfigError);
    CHECK_THROWS_AS(pipeline::PipelineConfig::from_json("{\"alpha\": \"x\"}", ".", "cfg.json"),
                    ConfigError);
    CHECK_THROWS_AS(pipeline::PipelineConfig::from_json("{\"hhi_basis\": \"z\"}", ".", "cfg.json"),
                    ConfigError);
    CHECK_THROWS_AS(pipeline::PipelineConfig::from_json("{", ".", "cfg.json"), InputError);
  }

  TEST_CASE("validation ranges and the required seed") {
    pipeline::PipelineConfig c;
    CHECK_THROWS_AS(c.validate(), ConfigError);  // no seed
    c.seed = 1;
    CHECK_NOTHROW(c.validate());
    auto bad = c;
    bad.filter.hhi_min = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.train_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.k_regions = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(pipeline::split_seed(1) != pipeline::split_seed(2));
  }

  TEST_CASE("two synthetic runs are byte-identical") {
    const auto dir = fresh_dir("onoma_pipeline_det");
    put(dir / "spec.json", small_spec);
    std::vector<std::string> first;
    const std::vector<std::string> files{"model.json", "operator.csv", "report/ratios.csv",
                                         "report/report.json", "typology.tsv", "confusion.csv"};
    for (const char* out : {"a", "b"}) {
      pipeline::PipelineConfig c;
      c.seed = 77;
      c.synth_spec = dir / "spec.json";
      c.output_dir = dir / out;
      c.min_core_names = 10;
      const auto summary = pipeline::run_pipeline(c);
      CHECK_FALSE(summary.files.empty());
      for (std::size_t i = 0; i < files.size(); ++i) {
        const auto text = slurp(dir / out / files[i]);
        CHECK_FALSE(text.empty());
        if (first.size() < files.size()) {
          first.push_back(text);
        } else {
          CHECK_MESSAGE(text == first[i], files[i]);
        }
      }
    }
    fs::remove_all(dir);
  }

  TEST_CASE("a missing input fails before anything is written") {
    const auto dir = fresh_dir("onoma_pipeline_err");
    pipeline::PipelineConfig c;
    c.seed = 1;
    c.corpus = dir / "missing.tsv";
    c.output_dir = dir / "out";
    CHECK_THROWS_AS(pipeline::run_pipeline(c), InputError);
    CHECK_FALSE(fs::exists(dir / "out"));

    put(dir / "corpus.tsv", "abc\tFR\t3\n");
    c.corpus = dir / "corpus.tsv";
    c.targets = {dir / "nope.txt"};
    CHECK_THROWS_AS(pipeline::run_pipeline(c), InputError);
    CHECK_FALSE(fs::exists(dir / "out"));
    fs::remove_all(dir);
  }

  TEST_CASE("missing seed is a config error") {
    pipeline::PipelineConfig c;
    c.synth_spec = "whatever.json";
    CHECK_THROWS_AS(pipeline::run_pipeline(c), ConfigError);
  }
}
