#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uvm/bsde.hpp"
#include "uvm/control.hpp"
#include "uvm/convergence.hpp"
#include "uvm/surface.hpp"

namespace uvm::io {

/// Provenance written as the first line of every CSV: `# config_hash=<h> seed=<s>`.
struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// Shortest round-trip decimal form; identical inputs give identical bytes.
std::string format_number(double value);

/// `t,x,v,value` for every retained level.
void write_surface_csv(const std::filesystem::path& path, const PriceSurface& surface,
                       const Provenance& provenance);

/// `x,v,q_star`.
void write_control_csv(const std::filesystem::path& path, const ControlField& field,
                       const GridSpec& grid, const Provenance& provenance);

/// `delta,p_delta,p0,error,abs_error,excluded`.
void write_sweep_csv(const std::filesystem::path& path, const ConvergenceReport& report,
                     const Provenance& provenance);

/// `delta,p_delta,p0,p1,e,e_over_delta`.
void write_corrector_csv(const std::filesystem::path& path, const CorrectorReport& report,
                         const Provenance& provenance);

/// Accumulates `path,step,t,x,v` rows as a simulation streams past.
class PathCsvWriter {
 public:
  PathCsvWriter(const std::filesystem::path& path, const Provenance& provenance);
  ~PathCsvWriter();
  PathCsvWriter(const PathCsvWriter&) = delete;
  PathCsvWriter& operator=(const PathCsvWriter&) = delete;
  void row(std::size_t path, std::size_t step, double t, double x, double v);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Gnuplot script plotting |error| against delta on log-log axes from the
/// sweep CSV, with the fitted line.
void write_sweep_plot(const std::filesystem::path& path, const std::string& csv_name,
                      const ConvergenceReport& report);

/// Flat JSON object writer for run summaries. Numbers that are not finite are
/// written as null.
class JsonSummary {
 public:
  JsonSummary();
  ~JsonSummary();
  JsonSummary(JsonSummary&&) noexcept;
  JsonSummary& operator=(JsonSummary&&) noexcept;

  JsonSummary& set(const std::string& key, double value);
  JsonSummary& set(const std::string& key, const std::string& value);
  JsonSummary& set(const std::string& key, const char* value);
  JsonSummary& set(const std::string& key, bool value);
  JsonSummary& set(const std::string& key, std::uint64_t value);
  JsonSummary& set(const std::string& key, std::span<const double> values);
  JsonSummary& set_null(const std::string& key);
  /// Embeds a JSON document given as text under `key`.
  JsonSummary& set_raw(const std::string& key, const std::string& json_text);
  JsonSummary& set(const std::string& key, const JsonSummary& nested);
  JsonSummary& append(const std::string& key, const JsonSummary& element);

  std::string dump() const;
  void write(const std::filesystem::path& path) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

JsonSummary to_json(const BsdeResidualReport& report);

}  // namespace uvm::io
