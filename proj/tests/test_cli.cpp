#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fraclab/artifacts.hpp"
#include "fraclab/cli.hpp"
#include "fraclab/config.hpp"
#include "fraclab/core.hpp"

namespace fraclab {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("fraclab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunConfig config(const std::string& command, const std::string& sub = "out") const {
    RunConfig cfg;
    cfg.command = command;
    cfg.output_dir = (root_ / sub).string();
    cfg.samples = 1 << 14;
    return cfg;
  }

  int run_quiet(const RunConfig& cfg) {
    std::ostringstream out;
    err_.str("");
    return run(cfg, out, err_);
  }

  fs::path root_;
  std::ostringstream err_;
};

TEST(Config, RoundTripsDefaults) {
  const RunConfig cfg;
  EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
}

TEST(Config, RoundTripsAwkwardValues) {
  RunConfig cfg;
  cfg.command = "reduction";
  cfg.seed = 18446744073709551615ull;
  cfg.s = 0.1;
  cfg.p = 1.0 / 3.0;
  cfg.r_min = 1e-300;
  cfg.grid_h = 5e-324;
  cfg.n_grid = {3, 9, 27};
  cfg.phi = "tabulated";
  cfg.phi_t = {0.01, 1.0, 123.456789012345678};
  cfg.phi_values = {0.1, 1.0, 2.0};
  cfg.output_dir = "some dir/with spaces";
  const std::string text = serialize_config(cfg);
  EXPECT_EQ(parse_config(text), cfg);
  EXPECT_EQ(serialize_config(parse_config(text)), text);
}

TEST(Config, ParsesSectionsCommentsAndBase) {
  RunConfig base;
  base.samples = 7;
  const RunConfig cfg = parse_config("# header\n[sobolev]\ns = 0.25   # order\np=3\n\n[geometry]\ndomain = koch\n", base);
  EXPECT_EQ(cfg.s, 0.25);
  EXPECT_EQ(cfg.p, 3.0);
  EXPECT_EQ(cfg.domain, "koch");
  EXPECT_EQ(cfg.samples, 7u);
}

TEST(Config, RejectsUnknownAndMisplacedKeys) {
  EXPECT_THROW(parse_config("[sobolev]\nq = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[nowhere]\n"), ConfigError);
  EXPECT_THROW(parse_config("[geometry]\ns = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("s = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[sobolev]\ns = 0.5\ns = 0.6\n"), ConfigError);
  EXPECT_THROW(parse_config("[sobolev]\ns = half\n"), ConfigError);
  EXPECT_THROW(parse_config("[sobolev]\ns = 0.5x\n"), ConfigError);
  EXPECT_THROW(parse_config("[sobolev]\nn_grid = 8,,16\n"), ConfigError);
  EXPECT_THROW(parse_config("[sobolev\n"), ConfigError);
}

TEST(Config, OverridesApplyOnTop) {
  RunConfig cfg = parse_config("[sobolev]\ns = 0.25\n");
  apply_overrides(cfg, {{"s", "0.75"}, {"n_grid", "4,8,16"}});
  EXPECT_EQ(cfg.s, 0.75);
  EXPECT_EQ(cfg.n_grid, (std::vector<int>{4, 8, 16}));
  EXPECT_THROW(apply_overrides(cfg, {{"bogus", "1"}}), ConfigError);
}

TEST(Validate, Examples) {
  RunConfig cfg;
  EXPECT_TRUE(validate_config(cfg).empty());
  cfg.s = 1.2;
  auto v = validate_config(cfg);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("outside (0,1)"), std::string::npos);

  RunConfig koch;
  koch.domain = "koch";
  koch.level = 3;
  koch.n_grid = {8, 256};
  v = validate_config(koch);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("resolution rule"), std::string::npos);

  RunConfig grid;
  grid.r = 0.05;
  grid.grid_h = 0.01;
  v = validate_config(grid);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("r/8"), std::string::npos);

  RunConfig bad;
  bad.p = 0.5;
  bad.domain = "sphere";
  bad.method = "magic";
  EXPECT_EQ(validate_config(bad).size(), 3u);
}

TEST(Artifacts, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Artifacts, CsvEscaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(split_csv("x,\"a,b\",\"q\"\"\""), (std::vector<std::string>{"x", "a,b", "q\""}));
}

TEST(Artifacts, RowsMustMatchSchema) {
  CsvTable t("scaling");
  EXPECT_THROW(t.add({"too", "short"}), Error);
  EXPECT_THROW(CsvTable("nope"), Error);
}

TEST(Artifacts, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST_F(CliTest, ConstantSeminormIsZero) {
  RunConfig cfg = config("seminorm");
  cfg.domain = "square";
  cfg.field = "const";
  ASSERT_EQ(run_quiet(cfg), kExitOk) << err_.str();
  const std::string csv = read_file(run_directory(cfg) / "sobolev.csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  const auto fields = split_csv(row);
  EXPECT_EQ(fields[4], "seminorm_p");
  EXPECT_EQ(fields[5], "0");
  const auto summary = nlohmann::json::parse(read_file(run_directory(cfg) / "summary.json"));
  EXPECT_EQ(summary["value_p"].get<double>(), 0.0);
}

TEST_F(CliTest, ExitCodes) {
  RunConfig bad_order = config("seminorm");
  bad_order.s = 1.2;
  EXPECT_EQ(run_quiet(bad_order), kExitConfigError);
  EXPECT_NE(err_.str().find("outside (0,1)"), std::string::npos);

  RunConfig unknown = config("teleport");
  EXPECT_EQ(run_quiet(unknown), kExitConfigError);

  RunConfig too_coarse = config("cutoff");
  too_coarse.n_grid = {1, 2, 4};
  EXPECT_EQ(run_quiet(too_coarse), kExitEstimatorError);
  EXPECT_NE(err_.str().find("diameter"), std::string::npos);

  RunConfig valid = config("validate");
  valid.s = 1.2;
  EXPECT_EQ(run_quiet(valid), kExitOk);
  const auto summary = nlohmann::json::parse(read_file(run_directory(valid) / "summary.json"));
  EXPECT_EQ(summary["violations"].size(), 1u);
}

TEST_F(CliTest, ManifestListsEveryArtifactWithItsHash) {
  RunConfig cfg = config("hardy");
  ASSERT_EQ(run_quiet(cfg), kExitOk) << err_.str();
  const fs::path dir = run_directory(cfg);
  const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename() != "manifest.json") ++files;
  ASSERT_EQ(manifest["files"].size(), files);
  for (const auto& f : manifest["files"]) {
    const std::string bytes = read_file(dir / f["name"].get<std::string>());
    EXPECT_EQ(f["sha256"].get<std::string>(), sha256_hex(bytes));
    EXPECT_EQ(f["bytes"].get<std::size_t>(), bytes.size());
  }
  EXPECT_EQ(load_config_file((dir / "run.cfg").string()), cfg);
}

TEST_F(CliTest, EveryCsvMatchesItsSchema) {
  std::vector<RunConfig> runs;
  auto add = [&](const std::string& command, auto&& tweak) {
    RunConfig cfg = config(command);
    tweak(cfg);
    runs.push_back(cfg);
  };
  add("tube", [](RunConfig& c) { c.domain = "comb"; c.r_min = 0.01; c.scales = 4; });
  add("dimension", [](RunConfig& c) { c.domain = "square"; c.centers = 16; });
  add("seminorm", [](RunConfig& c) { c.field = "ramp"; c.field_a = 0.1; c.field_b = 0.3; c.method = "montecarlo"; });
  add("hardy", [](RunConfig& c) { c.s = 0.6; });
  add("density", [](RunConfig& c) { c.domain = "square"; c.s = 0.3; c.p = 1; c.centers = 16; });
  add("cutoff", [](RunConfig& c) { c.n_grid = {4, 8, 16}; });
  add("reduction", [](RunConfig& c) { c.field = "x1"; });
  add("scaling", [](RunConfig& c) { c.M = 1.0; });
  std::size_t checked = 0;
  for (const RunConfig& cfg : runs) {
    ASSERT_EQ(run_quiet(cfg), kExitOk) << cfg.command << ": " << err_.str();
    for (const auto& entry : fs::directory_iterator(run_directory(cfg))) {
      if (entry.path().extension() != ".csv") continue;
      const std::string text = read_file(entry.path());
      EXPECT_EQ(text.find('\r'), std::string::npos);
      ASSERT_FALSE(text.empty());
      EXPECT_EQ(text.back(), '\n');
      std::istringstream lines(text);
      std::string line;
      std::getline(lines, line);
      EXPECT_EQ(line, csv_header(entry.path().stem().string())) << entry.path();
      const std::size_t width = csv_schema(entry.path().stem().string()).columns.size();
      std::size_t rows = 0;
      while (std::getline(lines, line)) {
        EXPECT_EQ(split_csv(line).size(), width) << entry.path() << ": " << line;
        ++rows;
      }
      EXPECT_GT(rows, 0u) << entry.path();
      ++checked;
    }
  }
  EXPECT_GE(checked, 9u);
}

TEST_F(CliTest, RerunIsByteIdenticalAcrossThreadCounts) {
  for (const std::string command : {"seminorm", "tube", "reduction"}) {
    RunConfig a = config(command, "a");
    RunConfig b = config(command, "b");
    for (RunConfig* c : {&a, &b}) {
      c->domain = "koch";
      c->level = 4;
      c->n_grid = {1, 2, 4};
      c->method = "montecarlo";
      c->r = 0.05;
      c->field = "x1";
    }
    setenv("FRACLAB_THREADS", "1", 1);
    ASSERT_EQ(run_quiet(a), kExitOk) << err_.str();
    setenv("FRACLAB_THREADS", "3", 1);
    ASSERT_EQ(run_quiet(b), kExitOk) << err_.str();
    unsetenv("FRACLAB_THREADS");
    // run.cfg records output_dir, so compare every other artifact.
    const auto ma = nlohmann::json::parse(read_file(run_directory(a) / "manifest.json"));
    const auto mb = nlohmann::json::parse(read_file(run_directory(b) / "manifest.json"));
    ASSERT_EQ(ma["files"].size(), mb["files"].size());
    for (std::size_t i = 0; i < ma["files"].size(); ++i) {
      if (ma["files"][i]["name"] == "run.cfg") continue;
      EXPECT_EQ(ma["files"][i], mb["files"][i]) << command;
    }
  }
}

int tool_status(const std::string& args) {
  const int raw = std::system((std::string(FRACLAB_TOOL) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

TEST_F(CliTest, ToolExitStatuses) {
  fs::create_directories(root_);
  const std::string out = " --output_dir " + (root_ / "tool").string();
  EXPECT_EQ(tool_status("seminorm --domain square --field const --samples 4096" + out), kExitOk);
  EXPECT_EQ(tool_status("seminorm --s 1.2" + out), kExitConfigError);
  EXPECT_EQ(tool_status("seminorm --bogus 1" + out), kExitConfigError);
  EXPECT_EQ(tool_status(out), kExitConfigError);
  EXPECT_EQ(tool_status("cutoff --n_grid 1,2,4" + out), kExitEstimatorError);
  EXPECT_EQ(tool_status("--help"), kExitOk);

  const fs::path cfg_path = root_ / "run.cfg";
  std::ofstream(cfg_path) << "[sobolev]\ns = 0.9\nfield = const\n[geometry]\ndomain = square\n";
  EXPECT_EQ(tool_status("seminorm --config " + cfg_path.string() + " --s 0.4 --samples 4096" + out), kExitOk);
  const RunConfig written = load_config_file((root_ / "tool" / "seminorm_seed1" / "run.cfg").string());
  EXPECT_EQ(written.s, 0.4);
  EXPECT_EQ(written.domain, "square");
  std::ofstream(cfg_path) << "[sobolev]\nsmoothness = 0.9\n";
  EXPECT_EQ(tool_status("seminorm --config " + cfg_path.string() + out), kExitConfigError);
}

}  // namespace
}  // namespace fraclab
