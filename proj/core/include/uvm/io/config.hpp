#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uvm/convergence.hpp"
#include "uvm/grid.hpp"
#include "uvm/hjb.hpp"
#include "uvm/model.hpp"
#include "uvm/payoff.hpp"

namespace uvm::io {

struct SimulationBlock {
  std::size_t n_paths = 100000;
  std::size_t n_steps = 150;
  std::uint64_t seed = 1;
  std::string policy = "fixed";  // "fixed" or "worst_case"
  double q = 0.2;
  std::size_t export_paths = 20;
};

struct SweepBlock {
  std::vector<double> deltas{0.5, 0.35, 0.2, 0.1, 0.05};
  NoiseFloorRule floor_rule = NoiseFloorRule::kErrorChange;
  double floor_multiplier = 10.0;
};

struct BsdeBlock {
  std::size_t n_paths = 20000;
  std::size_t n_steps = 200;
  std::uint64_t seed = 1;
  bool literal_driver = false;
};

/// One run's configuration. Every nested invariant is checked on load;
/// `snapshot` is the fully defaulted document in canonical form.
struct RunConfig {
  ModelParams model = reference_params(0.2);
  bool sigma_assumed = true;  // vol-of-vol taken from the default, not the document
  PiecewiseLinearPayoff payoff = PiecewiseLinearPayoff::butterfly(90.0, 100.0, 110.0);
  GridSpec grid{GridSpec::Values{}};
  double x0 = 100.0;
  double v0 = -1.0;
  SolverOptions solver{};
  bool solve_p0 = true;
  SimulationBlock simulation{};
  SweepBlock sweep{};
  std::vector<double> corrector_deltas{0.36, 0.16, 0.04};
  BsdeBlock bsde{};
  std::filesystem::path out_dir = "out";

  std::string snapshot;  // canonical JSON, output directory excluded
  std::string hash;      // 16 hex digits, FNV-1a 64 of `snapshot`
};

/// Parses a JSON document; throws ValidationError whose field() is the dotted
/// key path of the first offending entry (unknown keys included).
RunConfig parse_config(std::string_view json_text,
                       const std::vector<std::string>& overrides = {});

/// Reads `path` (or starts from the built-in defaults when empty) and applies
/// `key.path=value` overrides before validation.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

/// Built-in defaults as a JSON document.
std::string default_config_json();

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace uvm::io
