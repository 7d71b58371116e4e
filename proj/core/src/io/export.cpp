#include "uvm/io/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "uvm/error.hpp"

namespace uvm::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void header(std::ostream& out, const Provenance& p, const char* columns) {
  out << "# config_hash=" << p.config_hash << " seed=" << p.seed << '\n' << columns << '\n';
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_surface_csv(const std::filesystem::path& path, const PriceSurface& surface,
                       const Provenance& provenance) {
  std::ofstream out = open_for_write(path);
  header(out, provenance, "t,x,v,value");
  const GridSpec& grid = surface.grid();
  for (std::size_t s = 0; s < surface.slot_count(); ++s) {
    const std::string t = format_number(grid.t(surface.kept_times()[s]));
    const Array2D<double>& slice = surface.slot(s);
    for (std::size_t i = 0; i < grid.nx_total(); ++i)
      for (std::size_t j = 0; j < grid.n_v(); ++j)
        out << t << ',' << format_number(grid.x(i)) << ',' << format_number(grid.v(j)) << ','
            << format_number(slice(i, j)) << '\n';
  }
}

void write_control_csv(const std::filesystem::path& path, const ControlField& field,
                       const GridSpec& grid, const Provenance& provenance) {
  std::ofstream out = open_for_write(path);
  header(out, provenance, "x,v,q_star");
  for (std::size_t i = 0; i < grid.nx_total(); ++i)
    for (std::size_t j = 0; j < grid.n_v(); ++j)
      out << format_number(grid.x(i)) << ',' << format_number(grid.v(j)) << ','
          << format_number(field.q_star(i, j)) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path, const ConvergenceReport& report,
                     const Provenance& provenance) {
  std::ofstream out = open_for_write(path);
  header(out, provenance, "delta,p_delta,p0,error,abs_error,excluded");
  for (const SweepRow& r : report.rows)
    out << format_number(r.delta) << ',' << format_number(r.p_delta) << ','
        << format_number(r.p0) << ',' << format_number(r.error) << ','
        << format_number(r.abs_error) << ',' << (r.excluded ? 1 : 0) << '\n';
}

void write_corrector_csv(const std::filesystem::path& path, const CorrectorReport& report,
                         const Provenance& provenance) {
  std::ofstream out = open_for_write(path);
  header(out, provenance, "delta,p_delta,p0,p1,e,e_over_delta");
  for (const CorrectorRow& r : report.rows)
    out << format_number(r.delta) << ',' << format_number(r.p_delta) << ','
        << format_number(r.p0) << ',' << format_number(r.p1) << ',' << format_number(r.e) << ','
        << format_number(r.e_over_delta) << '\n';
}

struct PathCsvWriter::Impl {
  std::ofstream out;
};

PathCsvWriter::PathCsvWriter(const std::filesystem::path& path, const Provenance& provenance)
    : impl_(std::make_unique<Impl>(Impl{open_for_write(path)})) {
  header(impl_->out, provenance, "path,step,t,x,v");
}

PathCsvWriter::~PathCsvWriter() = default;

void PathCsvWriter::row(std::size_t path, std::size_t step, double t, double x, double v) {
  impl_->out << path << ',' << step << ',' << format_number(t) << ',' << format_number(x) << ','
             << format_number(v) << '\n';
}

void write_sweep_plot(const std::filesystem::path& path, const std::string& csv_name,
                      const ConvergenceReport& report) {
  std::ofstream out = open_for_write(path);
  out << "# |P_delta - P_0| against delta, log-log\n"
      << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set xlabel 'delta'\n"
      << "set ylabel '|P_delta - P_0|'\n"
      << "set key top left\n"
      << "set terminal pngcairo size 800,600\n"
      << "set output '" << std::filesystem::path(csv_name).stem().string() << ".png'\n"
      << "slope = " << format_number(report.fit.slope) << '\n'
      << "intercept = " << format_number(report.fit.intercept) << '\n'
      << "fit_line(d) = exp(intercept) * d**slope\n"
      << "plot '" << csv_name
      << "' skip 2 using 1:5 with linespoints pt 7 title '|error|', \\\n"
      << "     fit_line(x) with lines dt 2 title sprintf('slope %.3f', slope)\n";
}

struct JsonSummary::Impl {
  nlohmann::json doc = nlohmann::json::object();
};

JsonSummary::JsonSummary() : impl_(std::make_unique<Impl>()) {}
JsonSummary::~JsonSummary() = default;
JsonSummary::JsonSummary(JsonSummary&&) noexcept = default;
JsonSummary& JsonSummary::operator=(JsonSummary&&) noexcept = default;

JsonSummary& JsonSummary::set(const std::string& key, double value) {
  if (std::isfinite(value))
    impl_->doc[key] = value;
  else
    impl_->doc[key] = nullptr;
  return *this;
}
JsonSummary& JsonSummary::set(const std::string& key, const std::string& value) {
  impl_->doc[key] = value;
  return *this;
}
JsonSummary& JsonSummary::set(const std::string& key, const char* value) {
  impl_->doc[key] = std::string(value);
  return *this;
}
JsonSummary& JsonSummary::set(const std::string& key, bool value) {
  impl_->doc[key] = value;
  return *this;
}
JsonSummary& JsonSummary::set(const std::string& key, std::uint64_t value) {
  impl_->doc[key] = value;
  return *this;
}
JsonSummary& JsonSummary::set(const std::string& key, std::span<const double> values) {
  nlohmann::json arr = nlohmann::json::array();
  for (double v : values) arr.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json());
  impl_->doc[key] = std::move(arr);
  return *this;
}
JsonSummary& JsonSummary::set_null(const std::string& key) {
  impl_->doc[key] = nullptr;
  return *this;
}
JsonSummary& JsonSummary::set_raw(const std::string& key, const std::string& json_text) {
  impl_->doc[key] = nlohmann::json::parse(json_text);
  return *this;
}
JsonSummary& JsonSummary::set(const std::string& key, const JsonSummary& nested) {
  impl_->doc[key] = nested.impl_->doc;
  return *this;
}
JsonSummary& JsonSummary::append(const std::string& key, const JsonSummary& element) {
  nlohmann::json& arr = impl_->doc[key];
  if (arr.is_null()) arr = nlohmann::json::array();
  arr.push_back(element.impl_->doc);
  return *this;
}

std::string JsonSummary::dump() const { return impl_->doc.dump(2); }

void JsonSummary::write(const std::filesystem::path& path) const {
  std::ofstream out = open_for_write(path);
  out << dump() << '\n';
}

JsonSummary to_json(const BsdeResidualReport& r) {
  JsonSummary j;
  j.set("driver", std::string(to_string(r.driver)))
      .set("y0_fd", r.y0_fd)
      .set("y0_mean", r.y0_mean)
      .set("terminal_residual_rms", r.terminal_residual_rms)
      .set("terminal_residual_mean", r.terminal_residual_mean)
      .set("n_paths_used", static_cast<std::uint64_t>(r.n_paths_used))
      .set("n_paths_discarded", static_cast<std::uint64_t>(r.n_paths_discarded));
  const double total = static_cast<double>(r.n_paths_used + r.n_paths_discarded);
  j.set("discard_fraction", total > 0 ? static_cast<double>(r.n_paths_discarded) / total : 0.0);
  return j;
}

}  // namespace uvm::io
