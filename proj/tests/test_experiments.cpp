#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "freemix/experiments.hpp"

using namespace freemix;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path config_dir() { return fs::path(FREEMIX_CONFIG_DIR); }

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("freemix_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

long line_count(const std::string& text) {
  long lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FREEMIX_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("matrix literals") {
  const Matrix m = parse_matrix(json::parse("[[0, 1], [[0, 1], 0]]"));
  CHECK(m(0, 0) == Complex{0.0, 0.0});
  CHECK(m(0, 1) == Complex{1.0, 0.0});
  CHECK(m(1, 0) == Complex{0.0, 1.0});
  CHECK_THROWS_AS((void)parse_matrix(json::parse("[[1], [1, 2]]")), ConfigError);
  CHECK_THROWS_AS((void)parse_matrix(json::parse("[]")), ConfigError);
}

TEST_CASE("operator literals") {
  const MarkovOperator dep = parse_operator(
      json::parse(R"({"builtin": "depolarizing", "d": 2, "lambda": 0.3})"));
  CHECK(dep.validate().passes());

  const MarkovOperator conj = parse_operator(
      json::parse(R"({"builtin": "unitary-diag", "phases": [0.0, 1.0]})"));
  CHECK(conj.validate().passes());

  const MarkovOperator kraus = parse_operator(json::parse(
      R"({"algebra": [2], "kraus": [[[0, 1], [1, 0]]]})"));
  CHECK(kraus.validate().passes());

  CHECK_THROWS_AS((void)parse_operator(json::parse(R"({"builtin": "nope"})")),
                  ConfigError);
  CHECK_THROWS_AS(
      (void)parse_operator(json::parse(R"({"algebra": [2], "super": [[1]]})")),
      ConfigError);
  // Sampling without a seed is not reproducible, hence rejected.
  CHECK_THROWS_AS(
      (void)parse_operator(json::parse(R"({"builtin": "random-unital-cp"})")),
      ConfigError);
}

TEST_CASE("config structural validation") {
  CHECK_THROWS_AS((void)parse_config(json::parse(R"({"experiments": []})")),
                  ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config(json::parse(
          R"({"experiments": [{"kind": "decay-free-group", "word": "g0", "n_grid": []}]})")),
      ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config(json::parse(
          R"({"experiments": [{"kind": "decay-free-group", "word": "g0", "n_grid": [4, 2]}]})")),
      ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config(json::parse(
          R"({"experiments": [{"kind": "mystery"}]})")),
      ConfigError);
  // Duplicate output names would overwrite each other.
  CHECK_THROWS_AS(
      (void)parse_config(json::parse(
          R"({"experiments": [{"kind": "gallery", "name": "a"},
                               {"kind": "gallery", "name": "a"}]})")),
      ConfigError);
}

TEST_CASE("gallery run succeeds and is byte-deterministic") {
  const ExperimentConfig config = load_config(config_dir() / "gallery.json");
  const fs::path dir1 = fresh_dir("gallery1");
  const fs::path dir2 = fresh_dir("gallery2");
  CHECK(run_experiments(config, dir1) == 0);
  CHECK(run_experiments(config, dir2) == 0);

  const std::string csv1 = slurp(dir1 / "gallery.csv");
  CHECK(csv1 == slurp(dir2 / "gallery.csv"));
  CHECK(line_count(csv1) == 7);  // header + six canonical rows
  CHECK(csv1.find(",0\n") == std::string::npos);  // every row passes
}

TEST_CASE("classify experiments write the documented schema") {
  const ExperimentConfig config =
      load_config(config_dir() / "classify_gallery.json");
  const fs::path dir = fresh_dir("classify");
  CHECK(run_experiments(config, dir) == 0);
  const std::string csv = slurp(dir / "depolarizing03.csv");
  CHECK(csv.rfind("name,ue,swm,peripheral_eigs,max_defect_at_n\n", 0) == 0);
  CHECK(csv.find("depolarizing03,1,1,") != std::string::npos);

  const std::string conj = slurp(dir / "unitary_conjugation.csv");
  CHECK(conj.find("unitary_conjugation,1,0,") != std::string::npos);
}

TEST_CASE("non-CP operators are rejected with the validation exit code") {
  const ExperimentConfig config =
      load_config(config_dir() / "reject_transpose.json");
  const fs::path dir = fresh_dir("transpose");
  CHECK(run_experiments(config, dir) == 3);
  CHECK(validate_experiments(config) == 3);
}

TEST_CASE("guard inconsistencies surface as the diagnostic exit code") {
  // A one-step probe cannot see the Cesaro averaging, so the empirical
  // verdict contradicts the spectral one and the run must flag itself
  // rather than emit a silent misclassification.
  const json root = json::parse(R"({"experiments": [{
      "kind": "classify", "name": "underprobed",
      "operator": {"builtin": "depolarizing", "d": 2, "lambda": 0.3},
      "n_probe": 1}]})");
  const fs::path dir = fresh_dir("diag");
  CHECK(run_experiments(parse_config(root), dir) == 4);
}

TEST_CASE("decay and zsido experiments produce rows") {
  const fs::path dir = fresh_dir("decay");
  {
    const ExperimentConfig config =
        load_config(config_dir() / "decay_free_group.json");
    CHECK(run_experiments(config, dir) == 0);
    const std::string csv = slurp(dir / "g0_decay.csv");
    CHECK(csv.rfind("word,n,lower_exact_num,lower_exact_den,lower_float,"
                    "upper_float,constants_mode\n",
                    0) == 0);
    CHECK(line_count(csv) == 8);
    CHECK(csv.find("g0,4096,1,4096,") != std::string::npos);
  }
  {
    const ExperimentConfig config =
        load_config(config_dir() / "decay_free_product.json");
    CHECK(run_experiments(config, dir) == 0);
    const std::string csv = slurp(dir / "sigma_x_decay.csv");
    CHECK(csv.find(",p\n") != std::string::npos);
    CHECK(line_count(csv) == 8);
  }
  {
    json root = json::parse(R"({"experiments": [{
        "kind": "zsido", "name": "mini", "n_grid": [2, 4],
        "horizon": 200,
        "sequences": [{"type": "alternating", "dim": 2}],
        "subsequences": ["all", "even"]}]})");
    CHECK(run_experiments(parse_config(root), dir) == 0);
    const std::string csv = slurp(dir / "mini.csv");
    CHECK(csv.rfind("sequence_name,n,wmz_value,certificate,subsequence_name,"
                    "sub_norm\n",
                    0) == 0);
    CHECK(line_count(csv) == 5);  // header + 2 n values x 2 subsequences
    CHECK(csv.find("exact") != std::string::npos);
  }
}

TEST_CASE("output directory resolution order") {
  ExperimentConfig config;
  config.out = "from_config";
  CHECK(resolve_out_dir(config, std::string("from_cli")) == "from_cli");
  CHECK(resolve_out_dir(config, std::nullopt) == "from_config");
  config.out.reset();
  ::setenv(kOutDirEnvVar, "from_env", 1);
  CHECK(resolve_out_dir(config, std::nullopt) == "from_env");
  ::unsetenv(kOutDirEnvVar);
  CHECK(resolve_out_dir(config, std::nullopt) == ".");
}

TEST_CASE("command line interface exit codes") {
  const fs::path dir = fresh_dir("cli");

  CHECK(run_binary("run " + (config_dir() / "gallery.json").string() +
                   " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "gallery.csv"));

  CHECK(run_binary("validate " + (config_dir() / "gallery.json").string()) == 0);

  CHECK(run_binary("run " + (config_dir() / "reject_transpose.json").string() +
                   " --out " + (dir / "rej").string()) == 3);

  const fs::path bad_grid = dir / "bad_grid.json";
  std::ofstream(bad_grid) << R"({"experiments": [{"kind": "decay-free-group",
      "word": "g0", "n_grid": []}]})";
  CHECK(run_binary("run " + bad_grid.string()) == 2);

  const fs::path not_json = dir / "broken.json";
  std::ofstream(not_json) << "{ not json";
  CHECK(run_binary("validate " + not_json.string()) == 2);

  const fs::path bad_type = dir / "bad_type.json";
  std::ofstream(bad_type) << R"({"experiments": [{"kind": "classify",
      "name": "x", "operator": {"builtin": "depolarizing", "d": "two"}}]})";
  CHECK(run_binary("run " + bad_type.string()) == 2);

  CHECK(run_binary("run " + (dir / "missing.json").string()) == 2);
}
