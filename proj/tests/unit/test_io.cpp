#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <string>

#include "uvm/error.hpp"
#include "uvm/io/commands.hpp"
#include "uvm/io/config.hpp"
#include "uvm/io/export.hpp"

using namespace uvm;
using namespace uvm::io;
namespace fs = std::filesystem;

namespace {

std::string field_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<none>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("uvm_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig small(std::vector<std::string> extra = {}) const {
    std::vector<std::string> o{"grid.n_x=59",          "grid.n_v=9",           "grid.x_min=40",
                               "grid.x_max=160",       "grid.v_min=-2.5",      "grid.v_max=0.5",
                               "simulation.n_paths=400", "simulation.n_steps=20", "simulation.export_paths=3",
                               "bsde.n_paths=300",     "bsde.n_steps=20",      "output.dir=\"" + dir_.string() + "\""};
    o.insert(o.end(), extra.begin(), extra.end());
    return load_config({}, o);
  }

  fs::path dir_;
};

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const RunConfig a = parse_config(default_config_json());
  const RunConfig b = load_config({});
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.hash.size(), 16u);
  EXPECT_TRUE(b.sigma_assumed);
  EXPECT_FALSE(a.sigma_assumed);  // the emitted document spells sigma out
  EXPECT_EQ(a.model.delta(), 0.2);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of(R"({"grid": {"nx": 10}})"), "grid.nx");
  EXPECT_EQ(field_of(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(field_of(R"({"model": {"sigma_min": 0.3, "sigma_max": 0.2}})"), "model.sigma_min");
  EXPECT_EQ(field_of("{}", {"sweep.noise_floor=\"sometimes\""}), "sweep.noise_floor");
  EXPECT_EQ(field_of(R"({"payoff": {"type": "digital"}})"), "payoff.type");
  EXPECT_EQ(field_of(R"({"payoff": {"type": "butterfly", "strikes": [1, 2]}})"), "payoff.strikes");
  EXPECT_EQ(field_of("{}", {"grid.n_v=2"}), "grid.n_v");
}

TEST(Config, OverridesAndHash) {
  const RunConfig base = load_config({});
  const RunConfig moved = load_config({}, {"model.delta=0.35"});
  EXPECT_EQ(moved.model.delta(), 0.35);
  EXPECT_NE(base.hash, moved.hash);
  const RunConfig elsewhere = load_config({}, {"output.dir=\"/tmp/somewhere\""});
  EXPECT_EQ(base.hash, elsewhere.hash);
  EXPECT_EQ(elsewhere.out_dir, fs::path("/tmp/somewhere"));
  const RunConfig explicit_sigma = load_config({}, {"model.sigma=0.8"});
  EXPECT_FALSE(explicit_sigma.sigma_assumed);
}

TEST(Config, PayoffTypes) {
  EXPECT_EQ(parse_config(R"({"payoff": {"type": "call", "strike": 100}})").payoff(120), 20.0);
  EXPECT_EQ(parse_config(R"({"payoff": {"type": "short_call", "strike": 100}})").payoff(120), -20.0);
  EXPECT_EQ(parse_config(R"({"payoff": {"type": "constant", "value": 3}})").payoff(7), 3.0);
  const RunConfig r =
      parse_config(R"({"payoff": {"type": "ramps", "ramps": [[90, 1], [100, -2], [110, 1]]}})");
  EXPECT_EQ(r.payoff(100), 10.0);
  EXPECT_EQ(r.payoff(120), 0.0);
}

TEST(Config, Fnv1aKnownAnswers) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Export, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST_F(ScratchDir, ExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(run_command(Command::kPrice, small(), out, err), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "price.json"));
  EXPECT_EQ(slurp(dir_ / "surface.csv").rfind("# config_hash=", 0), 0u);
  EXPECT_EQ(run_command(Command::kSweep, small({"sweep.deltas=[0.5]"}), out, err), kExitNumerical);
  EXPECT_FALSE(err.str().empty());
}

TEST_F(ScratchDir, SimulateIsReproducible) {
  std::ostringstream out, err;
  ASSERT_EQ(run_command(Command::kSimulate, small(), out, err), kExitOk) << err.str();
  const std::string first = slurp(dir_ / "paths.csv");
  const std::string first_json = slurp(dir_ / "simulate.json");
  ASSERT_EQ(run_command(Command::kSimulate, small(), out, err), kExitOk);
  EXPECT_EQ(first, slurp(dir_ / "paths.csv"));
  EXPECT_EQ(first_json, slurp(dir_ / "simulate.json"));
  ASSERT_EQ(run_command(Command::kSimulate, small({"simulation.seed=2"}), out, err), kExitOk);
  EXPECT_NE(first, slurp(dir_ / "paths.csv"));
}

TEST_F(ScratchDir, SimulateAtZeroDeltaFreezesFactor) {
  std::ostringstream out, err;
  ASSERT_EQ(run_command(Command::kSimulate, small({"model.delta=0"}), out, err), kExitOk) << err.str();
  std::ifstream in(dir_ / "paths.csv");
  std::string line;
  std::getline(in, line);  // provenance
  std::getline(in, line);  // header
  ASSERT_EQ(line, "path,step,t,x,v");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::stod(line.substr(line.rfind(',') + 1)), -1.0);
    ++rows;
  }
  EXPECT_EQ(rows, 3u * 21u);
}

TEST_F(ScratchDir, CorrectorVanishesWithoutCorrelation) {
  std::ostringstream out, err;
  ASSERT_EQ(run_command(Command::kCorrector, small({"model.rho=0", "corrector.deltas=[0.36, 0.04]"}), out, err),
            kExitOk)
      << err.str();
  const auto j = nlohmann::json::parse(slurp(dir_ / "corrector.json"));
  EXPECT_EQ(j.at("p1").get<double>(), 0.0);
  EXPECT_EQ(j.at("command"), "corrector");
}

TEST_F(ScratchDir, CheckOnConstantPayoffIsExact) {
  std::ostringstream out, err;
  ASSERT_EQ(run_command(Command::kCheck2bsde,
                        small({R"(payoff={"type": "constant", "value": 2})"}), out, err),
            kExitOk)
      << err.str();
  const auto j = nlohmann::json::parse(slurp(dir_ / "check2bsde.json"));
  EXPECT_EQ(j.at("residual").at("terminal_residual_rms").get<double>(), 0.0);
}
