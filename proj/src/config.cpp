#include "lgf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lgf/errors.hpp"

namespace lgf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& fixed_keys() {
  static const std::set<std::string> keys = {
      "grid.dim",          "grid.N",          "grid.L",
      "scheme.kind",       "scheme.dealias",  "eos.a_l",
      "eos.a_g",           "eos.rho_l0",      "eos.P_l0",
      "eos.m_tilde",       "eos.n_tilde",     "visc.mu",
      "visc.lambda",       "analysis.q",      "analysis.theta",
      "integrator.method", "integrator.cfl",  "integrator.dt_max",
      "integrator.t_end",  "integrator.positivity_floor",
      "ic.recipe",         "output.dir",      "output.record_every",
      "output.snapshot_times", "seed"};
  return keys;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  std::vector<std::string> errors;

  std::optional<double> real(const std::string& key, std::optional<double> def = {}) {
    const auto it = values_.find(key);
    if (it == values_.end()) return missing(key, def);
    double v = 0.0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      errors.push_back(key + ": expected a finite real number, got '" + s + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const std::string& key, std::optional<long long> def = {}) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (def) return def;
      errors.push_back(key + ": required key missing");
      return std::nullopt;
    }
    long long v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      errors.push_back(key + ": expected an integer, got '" + s + "'");
      return std::nullopt;
    }
    return v;
  }

  std::string text(const std::string& key, const std::string& def) {
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
  }

  std::optional<bool> boolean(const std::string& key, bool def) {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    errors.push_back(key + ": expected true or false, got '" + it->second + "'");
    return std::nullopt;
  }

  std::vector<double> real_list(const std::string& key) {
    std::vector<double> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto t = trim(item);
      if (t.empty()) continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        errors.push_back(key + ": bad list entry '" + t + "'");
        continue;
      }
      out.push_back(v);
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::optional<double> missing(const std::string& key, std::optional<double> def) {
    if (def) return def;
    errors.push_back(key + ": required key missing");
    return std::nullopt;
  }

  std::map<std::string, std::string> values_;
};

template <class F>
auto attempt(std::vector<std::string>& errors, F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const Error& e) {
    errors.push_back(e.what());
    return std::nullopt;
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  std::vector<std::string> errors;
  std::map<std::string, std::string> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const auto key = trim(stripped.substr(0, eq));
    const auto value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (!values.emplace(key, value).second) {
      errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  Reader r(values);
  const std::string recipe_name = r.text("ic.recipe", "equilibrium");
  const IcRecipe* recipe = nullptr;
  for (const auto& rc : ic_recipes()) {
    if (rc.name == recipe_name) recipe = &rc;
  }
  if (recipe == nullptr) errors.push_back("ic.recipe: unknown recipe '" + recipe_name + "'");

  IcConfig ic;
  ic.recipe = recipe_name;
  for (const auto& [key, value] : values) {
    if (fixed_keys().contains(key)) continue;
    if (key.rfind("ic.", 0) == 0 && recipe != nullptr) {
      const auto name = key.substr(3);
      const bool known = std::any_of(recipe->params.begin(), recipe->params.end(),
                                     [&](const IcParamSpec& p) { return p.name == name; });
      if (known) {
        if (auto v = r.real(key)) ic.params[name] = *v;
        continue;
      }
      errors.push_back("unknown key '" + key + "' for recipe '" + recipe_name + "'");
      continue;
    }
    errors.push_back("unknown key '" + key + "'");
  }

  const auto dim = r.integer("grid.dim");
  const auto n = r.integer("grid.N");
  const auto length = r.real("grid.L");
  const auto kind_name = r.text("scheme.kind", "spectral");
  const auto dealias = r.boolean("scheme.dealias", true);
  const auto a_l = r.real("eos.a_l");
  const auto a_g = r.real("eos.a_g");
  const auto rho_l0 = r.real("eos.rho_l0");
  const auto p_l0 = r.real("eos.P_l0");
  const auto m_tilde = r.real("eos.m_tilde");
  const auto n_tilde = r.real("eos.n_tilde");
  const auto mu = r.real("visc.mu");
  const auto lambda = r.real("visc.lambda");
  const auto q = r.real("analysis.q", 1.1);
  const auto theta = r.real("analysis.theta", 0.5);
  const auto method_name = r.text("integrator.method", "rk4");
  const auto cfl = r.real("integrator.cfl", 0.4);
  const auto dt_max = r.real("integrator.dt_max", 1.0);
  const auto t_end = r.real("integrator.t_end");
  const auto floor = r.real("integrator.positivity_floor", 1e-8);
  const auto record_every = r.integer("output.record_every", 10);
  const auto snapshot_times = r.real_list("output.snapshot_times");
  const auto seed = r.integer("seed", 0);
  errors.insert(errors.end(), r.errors.begin(), r.errors.end());

  std::optional<Grid> grid;
  if (dim && n && length) {
    grid = attempt(errors, [&] { return Grid(static_cast<int>(*dim), static_cast<int>(*n), *length); });
  }
  Scheme scheme;
  if (auto kind = attempt(errors, [&] { return scheme_kind_from_string(kind_name); })) {
    scheme.kind = *kind;
  }
  scheme.dealias = dealias.value_or(true);
  if (grid && scheme.kind == SchemeKind::central4 && grid->n() < 16) {
    errors.push_back("scheme.kind = central4 requires grid.N >= 16");
  }

  std::optional<EosParams> eos;
  if (a_l && a_g && rho_l0 && p_l0 && m_tilde && n_tilde) {
    eos = attempt(errors, [&] { return EosParams(*a_l, *a_g, *rho_l0, *p_l0, *m_tilde, *n_tilde); });
  }
  std::optional<ViscosityParams> visc;
  if (mu && lambda) visc = attempt(errors, [&] { return ViscosityParams(*mu, *lambda); });
  std::optional<AnalysisParams> analysis;
  if (q && theta && visc) analysis = attempt(errors, [&] { return AnalysisParams(*q, *theta, *visc); });
  if (q && theta && !visc) {
    if (!(*q > 1.0 && *q < 4.0 / 3.0)) errors.push_back("q in (1, 4/3) violated");
    if (!(*theta > 0.0 && *theta < 1.0)) errors.push_back("theta in (0, 1) violated");
  }

  IntegratorSettings integrator;
  if (auto m = attempt(errors, [&] { return method_from_string(method_name); })) {
    integrator.method = *m;
  }
  if (cfl) integrator.cfl = *cfl;
  if (dt_max) integrator.dt_max = *dt_max;
  if (t_end) integrator.t_end = *t_end;
  if (floor) integrator.positivity_floor = *floor;
  if (cfl && dt_max && t_end && floor) attempt(errors, [&] { integrator.validate(); return 0; });

  OutputConfig output;
  output.dir = r.text("output.dir", "out");
  if (record_every) {
    if (*record_every < 1) errors.push_back("output.record_every >= 1 violated");
    output.record_every = static_cast<int>(*record_every);
  }
  output.snapshot_times = snapshot_times;
  std::sort(output.snapshot_times.begin(), output.snapshot_times.end());
  for (double ts : output.snapshot_times) {
    if (ts < 0.0 || (t_end && ts > *t_end)) {
      errors.push_back("output.snapshot_times: " + num(ts) + " outside [0, t_end]");
    }
  }
  if (seed && *seed < 0) errors.push_back("seed must be non-negative");

  if (grid && eos && recipe != nullptr) {
    attempt(errors, [&] { return make_initial_state(*grid, *eos, ic, 0).t; });
  }

  if (!errors.empty() || !grid || !eos || !visc || !analysis) {
    if (errors.empty()) errors.push_back("incomplete configuration");
    throw ConfigError(errors);
  }
  return SimConfig{*grid, scheme,      *eos,   *visc,
                   *analysis, integrator, ic,     output,
                   static_cast<std::uint64_t>(seed.value_or(0))};
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const SimConfig& c) {
  std::ostringstream os;
  os << "grid.dim = " << c.grid.dim() << '\n'
     << "grid.N = " << c.grid.n() << '\n'
     << "grid.L = " << num(c.grid.length()) << '\n'
     << "scheme.kind = " << to_string(c.scheme.kind) << '\n'
     << "scheme.dealias = " << (c.scheme.dealias ? "true" : "false") << '\n'
     << "eos.a_l = " << num(c.eos.a_l()) << '\n'
     << "eos.a_g = " << num(c.eos.a_g()) << '\n'
     << "eos.rho_l0 = " << num(c.eos.rho_l0()) << '\n'
     << "eos.P_l0 = " << num(c.eos.p_l0()) << '\n'
     << "eos.m_tilde = " << num(c.eos.m_tilde()) << '\n'
     << "eos.n_tilde = " << num(c.eos.n_tilde()) << '\n'
     << "visc.mu = " << num(c.visc.mu()) << '\n'
     << "visc.lambda = " << num(c.visc.lambda()) << '\n'
     << "analysis.q = " << num(c.analysis.q()) << '\n'
     << "analysis.theta = " << num(c.analysis.theta()) << '\n'
     << "integrator.method = " << to_string(c.integrator.method) << '\n'
     << "integrator.cfl = " << num(c.integrator.cfl) << '\n'
     << "integrator.dt_max = " << num(c.integrator.dt_max) << '\n'
     << "integrator.t_end = " << num(c.integrator.t_end) << '\n'
     << "integrator.positivity_floor = " << num(c.integrator.positivity_floor) << '\n'
     << "ic.recipe = " << c.ic.recipe << '\n';
  for (const auto& [k, v] : c.ic.params) os << "ic." << k << " = " << num(v) << '\n';
  os << "output.dir = " << c.output.dir << '\n'
     << "output.record_every = " << c.output.record_every << '\n';
  if (!c.output.snapshot_times.empty()) {
    os << "output.snapshot_times = ";
    for (std::size_t i = 0; i < c.output.snapshot_times.size(); ++i) {
      os << (i ? ", " : "") << num(c.output.snapshot_times[i]);
    }
    os << '\n';
  }
  os << "seed = " << c.seed << '\n';
  return os.str();
}

}  // namespace lgf
