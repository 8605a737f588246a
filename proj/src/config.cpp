#include "stokes_spectra/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "stokes_spectra/error.hpp"

namespace stokes_spectra {

namespace {

struct Spec {
  ConfigType type;
  std::string fallback;
  std::string doc;
  std::function<bool(double)> ok;  // numeric constraint; grids: every entry
  std::string rule;
  std::vector<std::string> choices;
};

auto any() { return [](double) { return true; }; }
auto positive() { return [](double x) { return x > 0.0; }; }
auto nonnegative() { return [](double x) { return x >= 0.0; }; }
auto at_least(double m) { return [m](double x) { return x >= m; }; }

const std::map<std::string, Spec>& schema() {
  static const std::map<std::string, Spec> s = {
      {"gravity", {ConfigType::real, "1", "g", positive(), "> 0", {}}},
      {"surface_tension", {ConfigType::real, "0", "kappa", nonnegative(), ">= 0", {}}},
      {"vorticity", {ConfigType::real, "0", "gamma", any(), "", {}}},
      {"depth", {ConfigType::depth, "inf", "h, or inf", any(), "", {}}},
      {"N", {ConfigType::integer, "64", "Bloch and evolution truncation", at_least(2), ">= 2", {}}},
      {"dno_order", {ConfigType::integer, "8", "DN expansion order", at_least(1), ">= 1", {}}},
      {"stokes_N", {ConfigType::integer, "32", "Stokes wave truncation", at_least(4), ">= 4", {}}},
      {"newton_tol", {ConfigType::real, "1e-11", "Stokes residual target", positive(), "> 0", {}}},
      {"newton_max_iter", {ConfigType::integer, "50", "", at_least(1), ">= 1", {}}},
      {"pairing_tol", {ConfigType::real, "1e-8", "lambda -> -conj(lambda) pairing check", positive(), "> 0", {}}},
      {"instability_cutoff", {ConfigType::real, "1e-8", "Re lambda > cutoff (1 + |lambda|)", positive(), "> 0", {}}},
      {"epsilon", {ConfigType::real, "0.01", "wave amplitude", nonnegative(), ">= 0", {}}},
      {"eps_grid", {ConfigType::grid, "0.01,0.02,0.04", "amplitudes for stokes continuation", nonnegative(), ">= 0", {}}},
      {"mu_grid", {ConfigType::grid, "-0.495:0.495:100", "bands", [](double x) { return std::abs(x) <= 0.5; }, "|mu| <= 0.5", {}}},
      {"mu", {ConfigType::real, "0.01", "kato", [](double x) { return std::abs(x) <= 0.5; }, "|mu| <= 0.5", {}}},
      {"h_grid", {ConfigType::grid, "1.2,1.5", "wbscan depths", positive(), "> 0", {}}},
      {"h_tol", {ConfigType::real, "0.001", "wbscan bisection", positive(), "> 0", {}}},
      {"mu_tol", {ConfigType::real, "1e-6", "figure8 mu_bar bisection", positive(), "> 0", {}}},
      {"apex_tol", {ConfigType::real, "1e-8", "figure8 apex golden section", positive(), "> 0", {}}},
      {"figure8_grid", {ConfigType::integer, "200", "uniform mu points", at_least(2), ">= 2", {}}},
      {"figure8_geometric", {ConfigType::integer, "12", "extra points near 0", nonnegative(), ">= 0", {}}},
      {"figure8_mu_max", {ConfigType::real, "0", "0: 4 epsilon", nonnegative(), ">= 0", {}}},
      {"wb_N", {ConfigType::integer, "48", "wbscan truncation", at_least(2), ">= 2", {}}},
      {"wb_grid", {ConfigType::integer, "40", "wbscan mu points", at_least(2), ">= 2", {}}},
      {"isola_p", {ConfigType::integer, "2", "collision index", at_least(2), ">= 2", {}}},
      {"isola_samples", {ConfigType::integer, "41", "points across the window", at_least(5), ">= 5", {}}},
      {"kato_nodes", {ConfigType::integer, "64", "initial quadrature nodes", at_least(8), ">= 8", {}}},
      {"kato_max_nodes", {ConfigType::integer, "1024", "", at_least(8), ">= 8", {}}},
      {"kato_stability", {ConfigType::real, "1e-9", "entry change under node doubling", positive(), "> 0", {}}},
      {"j_max", {ConfigType::integer, "16", "dispersion table and resonance window", at_least(1), ">= 1", {}}},
      {"p_max", {ConfigType::integer, "5", "collisions p = 2..p_max", at_least(2), ">= 2", {}}},
      {"collision_j_max", {ConfigType::integer, "64", "", at_least(2), ">= 2", {}}},
      {"collision_samples", {ConfigType::integer, "10000", "", at_least(10), ">= 10", {}}},
      {"nwave_N", {ConfigType::integer, "3", "", at_least(2), ">= 2", {}}},
      {"nwave_p", {ConfigType::integer, "2", "", at_least(1), ">= 1", {}}},
      {"nwave_tau", {ConfigType::real, "1", "", nonnegative(), ">= 0", {}}},
      {"nwave_threshold", {ConfigType::real, "1e-6", "near-resonance report", positive(), "> 0", {}}},
      {"nwave_budget", {ConfigType::real, "5e7", "max tuples", positive(), "> 0", {}}},
      {"nwave_max_report", {ConfigType::integer, "1000", "", at_least(0), ">= 0", {}}},
      {"wilton_m_max", {ConfigType::integer, "6", "", at_least(2), ">= 2", {}}},
      {"melnikov_nu", {ConfigType::integer, "2", "tangential sites 1..nu", at_least(1), ">= 1", {}}},
      {"melnikov_samples", {ConfigType::integer, "10000", "random (l, j) draws", at_least(1), ">= 1", {}}},
      {"melnikov_ell_max", {ConfigType::integer, "20", "", at_least(1), ">= 1", {}}},
      {"melnikov_upsilon", {ConfigType::real, "0.01", "", positive(), "> 0", {}}},
      {"melnikov_tau", {ConfigType::real, "2", "", nonnegative(), ">= 0", {}}},
      {"melnikov_d", {ConfigType::real, "1", "loss exponent, second condition", nonnegative(), ">= 0", {}}},
      {"seed", {ConfigType::unsigned_integer, "1", "sampled scans", any(), "", {}}},
      {"evolve_initial", {ConfigType::choice, "stokes", "initial datum", any(), "", {"stokes", "cosine"}}},
      {"evolve_T", {ConfigType::real, "0", "duration, 0: 10 / epsilon", nonnegative(), ">= 0", {}}},
      {"evolve_dt", {ConfigType::real, "0", "0: 0.25 * 2 pi / Omega(N)", nonnegative(), ">= 0", {}}},
      {"sobolev_s", {ConfigType::real, "4", "", any(), "", {}}},
      {"record_every", {ConfigType::integer, "1", "", at_least(1), ">= 1", {}}},
      {"blowup_factor", {ConfigType::real, "10", "", [](double x) { return x > 1.0; }, "> 1", {}}},
      {"out", {ConfigType::text, "out", "output directory", any(), "", {}}},
  };
  return s;
}

const Spec& spec_of(const std::string& key) {
  auto it = schema().find(key);
  if (it == schema().end()) throw InvalidArgument("unknown config key '" + key + "'");
  return it->second;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

double parse_real(const std::string& key, const std::string& text) {
  double x = 0.0;
  if (!parse_number(text, x) || !std::isfinite(x)) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + text + "' as a real number");
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  std::vector<double> g;
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    long long n = 0;
    if (parts.size() != 3 || !parse_number(parts[2], n) || n < 1) {
      throw InvalidArgument("config key '" + key + "': range must be start:stop:count");
    }
    const double a = parse_real(key, parts[0]), b = parse_real(key, parts[1]);
    if (n == 1) {
      if (a != b) throw InvalidArgument("config key '" + key + "': one point needs start == stop");
      g.push_back(a);
    }
    for (long long i = 0; n > 1 && i < n; ++i) {
      const double w = static_cast<double>(i), m = static_cast<double>(n - 1);
      g.push_back(i == 0 ? a : i == n - 1 ? b : (a * (m - w) + b * w) / m);
    }
  } else {
    for (const auto& p : split(text, ',')) g.push_back(parse_real(key, p));
  }
  if (g.empty()) throw InvalidArgument("config key '" + key + "': grid is empty");
  for (size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) {
      throw InvalidArgument("config key '" + key + "': grid must be strictly increasing");
    }
  }
  return g;
}

}  // namespace

std::string format_shortest(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_fixed17(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

RunConfig::RunConfig() {
  for (const auto& [key, spec] : schema()) set(key, spec.fallback);
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const Spec& s = spec_of(key);
  const std::string value = trim(raw);
  auto bad = [&](const std::string& why) {
    throw InvalidArgument("config key '" + key + "' = '" + value + "': " + why);
  };
  std::string canon;
  switch (s.type) {
    case ConfigType::integer: {
      long long v = 0;
      if (!parse_number(value, v)) bad("not an integer");
      if (!s.ok(static_cast<double>(v))) bad("must be " + s.rule);
      canon = std::to_string(v);
      break;
    }
    case ConfigType::unsigned_integer: {
      std::uint64_t v = 0;
      if (!parse_number(value, v)) bad("not an unsigned integer");
      canon = std::to_string(v);
      break;
    }
    case ConfigType::real: {
      const double v = parse_real(key, value);
      if (!s.ok(v)) bad("must be " + s.rule);
      canon = format_shortest(v);
      break;
    }
    case ConfigType::depth:
      canon = Depth::parse(value).to_string();
      break;
    case ConfigType::grid: {
      auto g = parse_grid(key, value);
      for (double x : g)
        if (!s.ok(x)) bad("entries must be " + s.rule);
      for (size_t i = 0; i < g.size(); ++i) canon += (i ? "," : "") + format_shortest(g[i]);
      break;
    }
    case ConfigType::choice:
      if (std::find(s.choices.begin(), s.choices.end(), value) == s.choices.end()) {
        std::string all;
        for (const auto& c : s.choices) all += (all.empty() ? "" : ", ") + c;
        bad("expected one of " + all);
      }
      canon = value;
      break;
    case ConfigType::text:
      if (value.empty()) bad("must be nonempty");
      if (value.find('\n') != std::string::npos) bad("must be one line");
      canon = value;
      break;
  }
  values_[key] = canon;
}

void RunConfig::assign(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidArgument("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(number) + ": expected key = value");
    }
    c.assign(line);
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const std::string& RunConfig::get(const std::string& key) const {
  spec_of(key);
  return values_.at(key);
}

long long RunConfig::integer(const std::string& key) const {
  if (type_of(key) != ConfigType::integer) throw InvalidArgument("config key '" + key + "' is not an integer");
  long long v = 0;
  parse_number(get(key), v);
  return v;
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key) const {
  if (type_of(key) != ConfigType::unsigned_integer)
    throw InvalidArgument("config key '" + key + "' is not an unsigned integer");
  std::uint64_t v = 0;
  parse_number(get(key), v);
  return v;
}

double RunConfig::real(const std::string& key) const {
  if (type_of(key) != ConfigType::real) throw InvalidArgument("config key '" + key + "' is not real");
  return parse_real(key, get(key));
}

std::vector<double> RunConfig::grid(const std::string& key) const {
  if (type_of(key) != ConfigType::grid) throw InvalidArgument("config key '" + key + "' is not a grid");
  return parse_grid(key, get(key));
}

Depth RunConfig::depth() const { return Depth::parse(get("depth")); }

PhysicalParams RunConfig::params() const {
  PhysicalParams p;
  p.gravity = real("gravity");
  p.surface_tension = real("surface_tension");
  p.vorticity = real("vorticity");
  p.depth = depth();
  return p;
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> k;
  for (const auto& [key, spec] : schema()) k.push_back(key);
  return k;
}

ConfigType RunConfig::type_of(const std::string& key) { return spec_of(key).type; }

const std::string& RunConfig::doc(const std::string& key) { return spec_of(key).doc; }

}  // namespace stokes_spectra
