#include "qmem/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qmem/errors.hpp"

namespace qmem {

using nlohmann::json;

namespace {

// Strict object reader: every key must be consumed, types are checked.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + " must be an object");
  }

  ~Reader() = default;

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in " + where());
  }

  bool has(const std::string& key) {
    const bool present = obj_.contains(key);
    if (present) seen_.insert(key);
    return present;
  }

  const json& raw(const std::string& key) { return obj_.at(key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(where(key) + " must be a non-negative integer");
    out = static_cast<Int>(v.get<unsigned long long>());
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    out = v.get<std::string>();
  }

  Reader child(const std::string& key) { return Reader(obj_.at(key), where(key)); }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string method_name(Method m) { return m == Method::adaptive_rk45 ? "adaptive-rk45" : "fixed-rk4"; }

Method method_from(const std::string& name) {
  if (name == "adaptive-rk45") return Method::adaptive_rk45;
  if (name == "fixed-rk4") return Method::fixed_rk4;
  throw ConfigError("unknown integrator method '" + name + "' (adaptive-rk45 or fixed-rk4)");
}

void read_range(Reader& r, const std::string& key, DetuneSearch& search) {
  if (!r.has(key)) return;
  const auto& v = r.raw(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(r.where(key) + " must be a [lo, hi] pair");
  search.lo = v[0].get<double>();
  search.hi = v[1].get<double>();
}

void read_search(Reader& r, DetuneSearch& search) {
  read_range(r, "range", search);
  r.integer("grid_points", search.grid_points);
  r.number("tolerance", search.tolerance);
}

std::vector<double> expand_grid(Reader& g) {
  double from = 0.0, to = 0.0;
  std::size_t points = 0;
  std::string spacing = "linear";
  bool endpoint = true;
  if (!g.has("from") || !g.has("to") || !g.has("points"))
    throw ConfigError(g.where() + " needs from, to and points");
  g.number("from", from);
  g.number("to", to);
  g.integer("points", points);
  g.string("spacing", spacing);
  g.boolean("endpoint", endpoint);
  g.finish();
  if (points == 0) return {};
  if (spacing != "linear" && spacing != "log")
    throw ConfigError(g.where("spacing") + " must be linear or log");
  if (spacing == "log" && (from <= 0.0 || to <= 0.0))
    throw ConfigError(g.where() + " log spacing needs positive bounds");
  std::vector<double> out(points);
  const double denom = points == 1 ? 1.0 : static_cast<double>(endpoint ? points - 1 : points);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / denom;
    out[i] = spacing == "log" ? from * std::pow(to / from, u) : from + (to - from) * u;
  }
  if (endpoint && points > 1) out.back() = to;
  return out;
}

SweepSpec read_sweep(Reader& r) {
  std::string kind = "coupling";
  r.string("kind", kind);
  SweepSpec spec = SweepSpec::defaults(sweep_kind_from_string(kind));
  if (r.has("grid")) {
    const auto& v = r.raw("grid");
    if (v.is_array()) {
      spec.grid.clear();
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(r.where("grid") + " entries must be numbers");
        spec.grid.push_back(x.get<double>());
      }
    } else {
      Reader g = r.child("grid");
      spec.grid = expand_grid(g);
    }
  }
  std::string policy = "fixed";
  r.string("detuning_policy", policy);
  spec.policy = detuning_policy_from_string(policy);
  if (r.has("search")) {
    Reader s = r.child("search");
    read_search(s, spec.search);
    s.finish();
  }
  r.finish();
  return spec;
}

json search_json(const DetuneSearch& s) {
  return {{"range", {s.lo, s.hi}}, {"grid_points", s.grid_points}, {"tolerance", s.tolerance}};
}

}  // namespace

Model RunConfig::model() const {
  Model m;
  m.device = DeviceParams::from_lab_units(device.ej_mev, device.ec_nev, device.f0_ghz,
                                          device.g_ratio);
  m.basis = ProductBasis(m_levels, n_levels);
  m.options.include_diagonal_drive = include_diagonal_drive;
  return m;
}

QubitState RunConfig::qubit_state() const { return QubitState::from_bloch(qubit.theta, qubit.phi); }

void RunConfig::validate() const {
  const Model m = model();
  protocol.validate();
  integrator.validate();
  if (!bias_in_domain(protocol.s_off)) throw ConfigError("s_off outside [0, 0.99)");
  if (!std::isfinite(qubit.theta) || !std::isfinite(qubit.phi))
    throw ConfigError("qubit angles must be finite");
  if (sweep) sweep->validate();
  if (workers == 0) throw ConfigError("workers must be at least 1");
  (void)m;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Reader r(root, "");
  if (r.has("device")) {
    Reader d = r.child("device");
    d.number("ej_mev", cfg.device.ej_mev);
    d.number("ec_nev", cfg.device.ec_nev);
    d.number("f0_ghz", cfg.device.f0_ghz);
    d.number("g_ratio", cfg.device.g_ratio);
    d.finish();
  }
  if (r.has("protocol")) {
    Reader p = r.child("protocol");
    p.number("s_off", cfg.protocol.s_off);
    p.number("ramp_ns", cfg.protocol.ramp_ns);
    p.number("store_hold_ns", cfg.protocol.store_hold_ns);
    p.number("initial_hold_ns", cfg.protocol.initial_hold_ns);
    std::string shape = to_string(cfg.protocol.ramp_shape);
    p.string("ramp_shape", shape);
    cfg.protocol.ramp_shape = ramp_shape_from_string(shape);
    p.integer("window_samples", cfg.protocol.window_samples);
    p.boolean("include_diagonal_drive", cfg.include_diagonal_drive);
    if (p.has("qubit")) {
      Reader q = p.child("qubit");
      q.number("theta", cfg.qubit.theta);
      q.number("phi", cfg.qubit.phi);
      q.finish();
    }
    p.finish();
  }
  if (r.has("integrator")) {
    Reader i = r.child("integrator");
    std::string method = method_name(cfg.integrator.method);
    i.string("method", method);
    cfg.integrator.method = method_from(method);
    i.number("rel_tol", cfg.integrator.rel_tol);
    i.number("abs_tol", cfg.integrator.abs_tol);
    i.number("max_step_ns", cfg.integrator.max_step);
    i.number("fixed_step_ns", cfg.integrator.fixed_step);
    i.integer("samples", cfg.integrator.samples);
    i.number("norm_guard", cfg.integrator.norm_guard);
    i.number("min_step_ns", cfg.integrator.min_step);
    i.number("refresh_threshold", cfg.integrator.refresh_threshold);
    i.finish();
  }
  if (r.has("basis")) {
    Reader b = r.child("basis");
    b.integer("m_levels", cfg.m_levels);
    b.integer("n_levels", cfg.n_levels);
    b.finish();
  }
  if (r.has("sweep")) {
    Reader s = r.child("sweep");
    cfg.sweep = read_sweep(s);
  }
  if (r.has("optimize")) {
    Reader o = r.child("optimize");
    read_search(o, cfg.optimize);
    o.finish();
  }
  r.string("output_dir", cfg.output_dir);
  r.integer("workers", cfg.workers);
  r.integer("seed", cfg.seed);
  r.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["device"] = {{"ej_mev", cfg.device.ej_mev},
                    {"ec_nev", cfg.device.ec_nev},
                    {"f0_ghz", cfg.device.f0_ghz},
                    {"g_ratio", cfg.device.g_ratio}};
  root["protocol"] = {{"s_off", cfg.protocol.s_off},
                      {"ramp_ns", cfg.protocol.ramp_ns},
                      {"store_hold_ns", cfg.protocol.store_hold_ns},
                      {"initial_hold_ns", cfg.protocol.initial_hold_ns},
                      {"ramp_shape", to_string(cfg.protocol.ramp_shape)},
                      {"window_samples", cfg.protocol.window_samples},
                      {"include_diagonal_drive", cfg.include_diagonal_drive},
                      {"qubit", {{"theta", cfg.qubit.theta}, {"phi", cfg.qubit.phi}}}};
  root["integrator"] = {{"method", method_name(cfg.integrator.method)},
                        {"rel_tol", cfg.integrator.rel_tol},
                        {"abs_tol", cfg.integrator.abs_tol},
                        {"max_step_ns", cfg.integrator.max_step},
                        {"fixed_step_ns", cfg.integrator.fixed_step},
                        {"samples", cfg.integrator.samples},
                        {"norm_guard", cfg.integrator.norm_guard},
                        {"min_step_ns", cfg.integrator.min_step},
                        {"refresh_threshold", cfg.integrator.refresh_threshold}};
  root["basis"] = {{"m_levels", cfg.m_levels}, {"n_levels", cfg.n_levels}};
  if (cfg.sweep) {
    root["sweep"] = {{"kind", to_string(cfg.sweep->kind)},
                     {"grid", cfg.sweep->grid},
                     {"detuning_policy", to_string(cfg.sweep->policy)},
                     {"search", search_json(cfg.sweep->search)}};
  }
  root["optimize"] = search_json(cfg.optimize);
  root["output_dir"] = cfg.output_dir;
  root["workers"] = cfg.workers;
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

}  // namespace qmem
