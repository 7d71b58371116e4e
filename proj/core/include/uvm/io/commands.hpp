#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "uvm/io/config.hpp"

namespace uvm::io {

enum class Command { kPrice, kSimulate, kSweep, kCorrector, kCheck2bsde };

std::optional<Command> parse_command(std::string_view name) noexcept;
std::string_view to_string(Command command) noexcept;

/// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Each command writes its artifacts under `cfg.out_dir`, prints the headline
/// numbers to `out` and returns the files written. Exceptions propagate.
std::vector<std::filesystem::path> cmd_price(const RunConfig& cfg, std::ostream& out);
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg, std::ostream& out);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg, std::ostream& out);
std::vector<std::filesystem::path> cmd_corrector(const RunConfig& cfg, std::ostream& out);
std::vector<std::filesystem::path> cmd_check2bsde(const RunConfig& cfg, std::ostream& out);

/// Dispatches and maps failures to exit codes: ValidationError -> 1,
/// NumericalError and I/O failures -> 2. The message goes to `err`.
int run_command(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace uvm::io
