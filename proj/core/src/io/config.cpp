#include "uvm/io/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uvm/error.hpp"

namespace uvm::io {

using nlohmann::json;

namespace {

const json& defaults() {
  static const json doc = {
      {"model",
       {{"r", 0.0}, {"a", 0.6}, {"b", 0.5}, {"alpha", 2.0}, {"sigma", kAssumedVolOfVol},
        {"rho", 0.5}, {"sigma_min", 0.1}, {"sigma_max", 0.2}, {"delta", 0.2}}},
      {"payoff", {{"type", "butterfly"}, {"strikes", {90.0, 100.0, 110.0}}}},
      {"grid",
       {{"x_min", 0.0}, {"x_max", 300.0}, {"n_x", 400}, {"v_min", -3.0}, {"v_max", 1.0},
        {"n_v", 40}, {"T", 0.15}, {"n_t", 1}, {"cfl_safety", 0.4}}},
      {"point", {{"x", 100.0}, {"v", -1.0}}},
      {"solver",
       {{"retention", "endpoints"},
        {"memory_budget_mb", 256},
        {"terminal_averaging", false},
        {"solve_p0", true}}},
      {"simulation",
       {{"n_paths", 100000},
        {"n_steps", 150},
        {"seed", 1},
        {"policy", "fixed"},
        {"q", 0.2},
        {"export_paths", 20}}},
      {"sweep",
       {{"deltas", {0.5, 0.35, 0.2, 0.1, 0.05}},
        {"noise_floor", "error_change"},
        {"floor_multiplier", 10.0}}},
      {"corrector", {{"deltas", {0.36, 0.16, 0.04}}}},
      {"bsde", {{"n_paths", 20000}, {"n_steps", 200}, {"seed", 1}, {"driver", "reconstructed"}}},
      {"output", {{"dir", "out"}}},
  };
  return doc;
}

const std::set<std::string>& payoff_keys() {
  static const std::set<std::string> keys{"type", "strike", "strikes", "value", "ramps",
                                          "constant"};
  return keys;
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Rejects keys absent from the schema; the payoff block has its own key set.
void check_keys(const json& doc, const json& schema, const std::string& prefix) {
  if (!doc.is_object()) throw ValidationError(prefix.empty() ? "config" : prefix, "expected an object");
  for (const auto& [key, value] : doc.items()) {
    const std::string path = join(prefix, key);
    if (path == "payoff") {
      if (!value.is_object()) throw ValidationError(path, "expected an object");
      for (const auto& [pk, pv] : value.items())
        if (!payoff_keys().count(pk)) throw ValidationError(join(path, pk), "unknown key");
      continue;
    }
    if (!schema.contains(key)) throw ValidationError(path, "unknown key");
    if (schema.at(key).is_object()) check_keys(value, schema.at(key), path);
  }
}

void merge(json& into, const json& patch) {
  for (const auto& [key, value] : patch.items()) {
    if (key != "payoff" && value.is_object() && into.contains(key) && into[key].is_object())
      merge(into[key], value);
    else
      into[key] = value;
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError(assignment, "override must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;  // bare strings need no quotes
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ValidationError(path, "empty key segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    json& child = (*node)[key];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ValidationError(path.substr(0, dot), "not an object");
    node = &child;
    start = dot + 1;
  }
}

class Reader {
 public:
  Reader(const json& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {}

  const json& at(const std::string& key) const {
    if (!doc_.contains(key)) throw ValidationError(path(key), "missing");
    return doc_.at(key);
  }
  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ValidationError(path(key), "expected a number");
    return v.get<double>();
  }
  std::size_t count(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ValidationError(path(key), "expected a non-negative integer");
    return v.get<std::size_t>();
  }
  bool flag(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_boolean()) throw ValidationError(path(key), "expected true or false");
    return v.get<bool>();
  }
  std::string text(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ValidationError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ValidationError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ValidationError(path(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::string path(const std::string& key) const { return join(prefix_, key); }

 private:
  const json& doc_;
  std::string prefix_;
};

// Re-labels a nested ValidationError with the config path of its block.
template <class F>
auto within(const std::string& block, F&& build) {
  try {
    return build();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    const std::string prefix = e.field() + ": ";
    const std::string message =
        what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
    throw ValidationError(join(block, e.field()), message);
  }
}

PiecewiseLinearPayoff parse_payoff(const json& doc) {
  const Reader in(doc, "payoff");
  const std::string type = in.text("type");
  if (type == "call") return PiecewiseLinearPayoff::call(in.number("strike"));
  if (type == "short_call") return PiecewiseLinearPayoff::short_call(in.number("strike"));
  if (type == "constant") return PiecewiseLinearPayoff::constant(in.number("value"));
  if (type == "butterfly") {
    const auto k = in.numbers("strikes");
    if (k.size() != 3) throw ValidationError("payoff.strikes", "butterfly needs three strikes");
    return within("payoff", [&] { return PiecewiseLinearPayoff::butterfly(k[0], k[1], k[2]); });
  }
  if (type == "ramps") {
    std::vector<PiecewiseLinearPayoff::Ramp> ramps;
    const json& list = in.at("ramps");
    if (!list.is_array() || list.empty())
      throw ValidationError("payoff.ramps", "expected a non-empty array of [strike, weight]");
    for (const json& r : list) {
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw ValidationError("payoff.ramps", "each entry must be [strike, weight]");
      ramps.push_back({r[0].get<double>(), r[1].get<double>()});
    }
    const double c = doc.contains("constant") ? in.number("constant") : 0.0;
    return within("payoff", [&] { return PiecewiseLinearPayoff::from_ramps(ramps, c); });
  }
  throw ValidationError("payoff.type",
                        "unknown payoff type '" + type +
                            "' (call, short_call, butterfly, constant, ramps)");
}

NoiseFloorRule parse_floor_rule(const std::string& name) {
  if (name == "error_change") return NoiseFloorRule::kErrorChange;
  if (name == "price_change") return NoiseFloorRule::kPriceChange;
  if (name == "none") return NoiseFloorRule::kNone;
  throw ValidationError("sweep.noise_floor", "expected error_change, price_change or none");
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string default_config_json() { return defaults().dump(2); }

RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides) {
  json user;
  if (json_text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    user = json::object();
  } else {
    try {
      user = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
  }
  for (const std::string& o : overrides) apply_override(user, o);
  check_keys(user, defaults(), "");

  json doc = defaults();
  merge(doc, user);

  RunConfig cfg;
  cfg.sigma_assumed = !(user.contains("model") && user["model"].contains("sigma"));

  const Reader m(doc["model"], "model");
  cfg.model = within("model", [&] {
    return ModelParams({m.number("r"), m.number("a"), m.number("b"), m.number("alpha"),
                        m.number("sigma"), m.number("rho"), m.number("sigma_min"),
                        m.number("sigma_max"), m.number("delta")});
  });
  cfg.payoff = parse_payoff(doc["payoff"]);

  const Reader g(doc["grid"], "grid");
  cfg.grid = within("grid", [&] {
    return GridSpec({g.number("x_min"), g.number("x_max"), g.count("n_x"), g.number("v_min"),
                     g.number("v_max"), g.count("n_v"), g.number("T"), g.count("n_t"),
                     g.number("cfl_safety")});
  });

  const Reader p(doc["point"], "point");
  cfg.x0 = p.number("x");
  cfg.v0 = p.number("v");
  if (!cfg.grid.contains(cfg.x0, cfg.v0))
    throw ValidationError("point", "evaluation point lies outside the grid");

  const Reader s(doc["solver"], "solver");
  const std::string retention = s.text("retention");
  if (retention == "endpoints")
    cfg.solver.retention = Retention::kEndpoints;
  else if (retention == "dense")
    cfg.solver.retention = Retention::kDense;
  else
    throw ValidationError("solver.retention", "expected endpoints or dense");
  const std::size_t budget_mb = s.count("memory_budget_mb");
  if (budget_mb == 0) throw ValidationError("solver.memory_budget_mb", "must be positive");
  cfg.solver.memory_budget_bytes = budget_mb << 20;
  cfg.solver.terminal_averaging = s.flag("terminal_averaging");
  cfg.solve_p0 = s.flag("solve_p0");

  const Reader sim(doc["simulation"], "simulation");
  cfg.simulation.n_paths = sim.count("n_paths");
  cfg.simulation.n_steps = sim.count("n_steps");
  cfg.simulation.seed = sim.count("seed");
  cfg.simulation.policy = sim.text("policy");
  if (cfg.simulation.policy != "fixed" && cfg.simulation.policy != "worst_case")
    throw ValidationError("simulation.policy", "expected fixed or worst_case");
  cfg.simulation.q = sim.number("q");
  cfg.simulation.export_paths = sim.count("export_paths");
  if (cfg.simulation.n_paths == 0) throw ValidationError("simulation.n_paths", "must be positive");
  if (cfg.simulation.n_steps == 0) throw ValidationError("simulation.n_steps", "must be positive");

  const Reader sw(doc["sweep"], "sweep");
  cfg.sweep.deltas = sw.numbers("deltas");
  cfg.sweep.floor_rule = parse_floor_rule(sw.text("noise_floor"));
  cfg.sweep.floor_multiplier = sw.number("floor_multiplier");
  if (!(cfg.sweep.floor_multiplier >= 0.0))
    throw ValidationError("sweep.floor_multiplier", "must be non-negative");

  cfg.corrector_deltas = Reader(doc["corrector"], "corrector").numbers("deltas");

  const Reader b(doc["bsde"], "bsde");
  cfg.bsde.n_paths = b.count("n_paths");
  cfg.bsde.n_steps = b.count("n_steps");
  cfg.bsde.seed = b.count("seed");
  const std::string driver = b.text("driver");
  if (driver != "reconstructed" && driver != "literal")
    throw ValidationError("bsde.driver", "expected reconstructed or literal");
  cfg.bsde.literal_driver = driver == "literal";

  cfg.out_dir = Reader(doc["output"], "output").text("dir");

  json snapshot = doc;
  snapshot.erase("output");
  cfg.snapshot = snapshot.dump();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.snapshot)));
  cfg.hash = hex;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides) {
  if (path.empty()) return parse_config("", overrides);
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace uvm::io
