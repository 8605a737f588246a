#include "stokes_spectra/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "json.hpp"
#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/evolution.hpp"
#include "stokes_spectra/parallel.hpp"
#include "stokes_spectra/resonance.hpp"
#include "stokes_spectra/spectra.hpp"
#include "stokes_spectra/stokes.hpp"

namespace stokes_spectra {

namespace {

using Json = nlohmann::ordered_json;

// Non-converged Newton solve or a blow-up: a report, not an exception from the module.
struct Unsuccessful {
  std::string status;
  std::string message;
  std::map<std::string, double> context;
};

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& columns) {
    text_ = "# schema_version: " + std::to_string(csv_schema_version) + "\n";
    row(columns);
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

std::string num(double x) { return format_fixed17(x); }
std::string num(int x) { return std::to_string(x); }

Json cjson(cplx z) { return Json::array({z.real(), z.imag()}); }

Json config_json(const RunConfig& c) {
  Json j = Json::object();
  for (const auto& key : RunConfig::keys()) {
    switch (RunConfig::type_of(key)) {
      case ConfigType::integer: j[key] = c.integer(key); break;
      case ConfigType::unsigned_integer: j[key] = c.unsigned_integer(key); break;
      case ConfigType::real: j[key] = c.real(key); break;
      case ConfigType::grid: j[key] = c.grid(key); break;
      case ConfigType::depth: {
        Depth d = c.depth();
        if (d.is_infinite()) j[key] = "inf";
        else j[key] = d.value();
        break;
      }
      case ConfigType::choice:
      case ConfigType::text: j[key] = c.get(key); break;
    }
  }
  return j;
}

Json params_json(const PhysicalParams& p) {
  Json j;
  j["gravity"] = p.gravity;
  j["surface_tension"] = p.surface_tension;
  j["vorticity"] = p.vorticity;
  if (p.depth.is_infinite()) j["depth"] = "inf";
  else j["depth"] = p.depth.value();
  return j;
}

Json wave_json(const StokesWave& w) {
  Json j;
  j["amplitude"] = w.amplitude;
  j["speed"] = w.speed;
  j["residual_norm"] = w.residual_norm;
  j["initial_residual"] = w.initial_residual;
  j["iterations"] = w.iterations;
  j["converged"] = w.converged;
  j["status"] = w.status;
  j["N"] = w.N;
  j["order"] = w.order;
  j["params"] = params_json(w.params);
  Json a = Json::array(), b = Json::array();
  for (int k = 0; k <= w.eta.truncation(); ++k) a.push_back(w.eta.cos_coeff(k));
  for (int k = 0; k <= w.psi.truncation(); ++k) b.push_back(w.psi.sin_coeff(k));
  j["eta_cos"] = a;
  j["psi_sin"] = b;
  return j;
}

StokesOptions stokes_options(const RunConfig& c, int N) {
  StokesOptions o;
  o.N = N;
  o.order = static_cast<int>(c.integer("dno_order"));
  o.tol = c.real("newton_tol");
  o.max_iter = static_cast<int>(c.integer("newton_max_iter"));
  return o;
}

BlochOptions bloch_options(const RunConfig& c, int N) {
  BlochOptions o;
  o.N = N;
  o.order = static_cast<int>(c.integer("dno_order"));
  o.cutoff = c.real("instability_cutoff");
  return o;
}

StokesWave converged_wave(const RunConfig& c, double eps, int N) {
  auto w = solve_stokes(eps, c.params(), stokes_options(c, N));
  if (!w.converged) {
    throw Unsuccessful{"not_converged", "Stokes solve did not converge: " + w.status,
                       {{"epsilon", eps},
                        {"residual_norm", w.residual_norm},
                        {"iterations", static_cast<double>(w.iterations)}}};
  }
  return w;
}

StokesWave spectral_wave(const RunConfig& c) {
  return converged_wave(c, c.real("epsilon"), static_cast<int>(c.integer("stokes_N")));
}

using Files = std::vector<std::pair<std::string, std::string>>;
using Pipeline = std::function<Json(const RunConfig&, Files&, int)>;

// ------------------------------------------------------------ commands

Json cmd_dispersion(const RunConfig& c, Files& files, int) {
  const auto p = c.params();
  p.validate();
  const int jm = static_cast<int>(c.integer("j_max"));
  Csv table({"j", "omega"});
  Json rows = Json::array();
  for (int j = -jm; j <= jm; ++j) {
    if (j == 0) continue;
    const double w = omega_j(j, p);
    table.row({num(j), num(w)});
  }
  CollisionOptions co;
  co.j_max = static_cast<int>(c.integer("collision_j_max"));
  co.mu_samples = static_cast<int>(c.integer("collision_samples"));
  auto search = find_collisions(static_cast<int>(c.integer("p_max")), p, co);
  Csv col({"p", "mu", "omega_star"});
  Json list = Json::array();
  for (const auto& pt : search.points) {
    col.row({num(pt.p), num(pt.mu), num(pt.omega_star)});
    Json e;
    e["p"] = pt.p;
    e["mu"] = pt.mu;
    e["omega_star"] = pt.omega_star;
    e["first"] = {{"j", pt.first.j}, {"sigma", pt.first.sigma}};
    e["second"] = {{"j", pt.second.j}, {"sigma", pt.second.sigma}};
    e["defect"] = pt.defect;
    list.push_back(e);
  }
  Json zeros = Json::array();
  for (const auto& b : search.zero_branches) zeros.push_back({{"j", b.j}, {"sigma", b.sigma}});
  files.emplace_back("dispersion.csv", table.text());
  files.emplace_back("collisions.csv", col.text());
  Json r;
  r["rows"] = 2 * jm;
  r["collisions"] = list;
  r["missing_p"] = search.missing;
  r["zero_branches"] = zeros;
  return r;
}

Json cmd_resonance(const RunConfig& c, Files& files, int jobs) {
  const auto p = c.params();
  NWaveOptions no;
  no.threshold = c.real("nwave_threshold");
  no.budget = c.real("nwave_budget");
  no.max_report = static_cast<std::size_t>(c.integer("nwave_max_report"));
  no.jobs = jobs;
  const int N = static_cast<int>(c.integer("nwave_N"));
  auto rep = scan_nwave(N, static_cast<int>(c.integer("nwave_p")),
                        static_cast<int>(c.integer("j_max")), c.real("nwave_tau"), p, no);
  std::vector<std::string> cols;
  for (int i = 1; i <= N; ++i) cols.push_back("j" + std::to_string(i));
  cols.push_back("divisor");
  cols.push_back("scaled");
  Csv csv(cols);
  for (const auto& e : rep.near) {
    std::vector<std::string> cells;
    for (int j : e.wavevectors) cells.push_back(num(j));
    cells.push_back(num(e.divisor));
    cells.push_back(num(e.scaled));
    csv.row(cells);
  }
  files.emplace_back("resonance.csv", csv.text());

  Json nw;
  nw["N"] = rep.N;
  nw["p"] = rep.p;
  nw["j_max"] = rep.j_max;
  nw["tau"] = rep.tau;
  nw["enumerated"] = rep.enumerated;
  nw["excluded"] = rep.excluded;
  nw["min_scaled"] = rep.min_scaled;
  nw["argmin"] = {{"wavevectors", rep.argmin.wavevectors},
                  {"divisor", rep.argmin.divisor},
                  {"scaled", rep.argmin.scaled}};
  nw["near_count"] = rep.near.size();
  nw["truncated"] = rep.truncated;

  Json wil = Json::array();
  for (const auto& w : wilton_tensions(static_cast<int>(c.integer("wilton_m_max")), p))
    wil.push_back({{"M", w.M}, {"kappa", w.kappa}});

  // sampled Melnikov check at omega = (Omega(1), ..., Omega(nu))
  const int nu = static_cast<int>(c.integer("melnikov_nu"));
  const int L = static_cast<int>(c.integer("melnikov_ell_max"));
  const int jm = static_cast<int>(c.integer("j_max"));
  const long long samples = c.integer("melnikov_samples");
  MelnikovBudget mb{c.real("melnikov_upsilon"), c.real("melnikov_tau"), c.real("melnikov_d")};
  std::vector<double> om(nu);
  for (int i = 0; i < nu; ++i) om[i] = omega_j(i + 1, p);
  std::mt19937_64 rng(c.unsigned_integer("seed"));
  auto draw = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  long long fail_d = 0, fail_1 = 0, fail_2 = 0, tested_2 = 0;
  double dmin = std::numeric_limits<double>::infinity();
  std::vector<int> arg;
  for (long long s = 0; s < samples; ++s) {
    std::vector<int> ell(nu);
    bool zero = true;
    do {
      zero = true;
      for (auto& l : ell) {
        l = draw(-L, L);
        zero = zero && l == 0;
      }
    } while (zero);
    const int j = nu + draw(1, jm), jp = nu + draw(1, jm);
    double dot = 0.0, sup = 0.0;
    for (int i = 0; i < nu; ++i) {
      dot += om[i] * ell[i];
      sup = std::max(sup, static_cast<double>(std::abs(ell[i])));
    }
    const double scaled = std::abs(dot) * std::pow(sup, mb.tau);
    if (scaled < dmin) {
      dmin = scaled;
      arg = ell;
    }
    fail_d += !check_melnikov(om, ell, 0, std::nullopt, 0.0, std::nullopt, mb);
    fail_1 += !check_melnikov(om, ell, j, std::nullopt, omega_j(j, p), std::nullopt, mb);
    ++tested_2;
    fail_2 += !check_melnikov(om, ell, j, jp, omega_j(j, p), omega_j(jp, p), mb);
  }
  Json mel;
  mel["omega"] = om;
  mel["samples"] = samples;
  mel["diophantine_min_scaled"] = dmin;
  mel["diophantine_argmin"] = arg;
  mel["diophantine_failures"] = fail_d;
  mel["first_failures"] = fail_1;
  mel["second_failures"] = fail_2;
  mel["second_tested"] = tested_2;

  Json r;
  r["nwave"] = nw;
  r["wilton"] = wil;
  r["melnikov"] = mel;
  return r;
}

Json cmd_stokes(const RunConfig& c, Files& files, int) {
  auto grid = c.grid("eps_grid");
  auto waves = continue_in_amplitude(grid, c.params(),
                                     stokes_options(c, static_cast<int>(c.integer("stokes_N"))));
  Csv csv({"epsilon", "speed", "residual_norm", "iterations"});
  Json arr = Json::array();
  for (const auto& w : waves) {
    csv.row({num(w.amplitude), num(w.speed), num(w.residual_norm), num(w.iterations)});
    arr.push_back(wave_json(w));
  }
  files.emplace_back("stokes.csv", csv.text());
  Json r;
  r["linear_speed"] = c.params().linear_speed();
  r["waves"] = arr;
  for (const auto& w : waves) {
    if (!w.converged) {
      throw Unsuccessful{"not_converged", "Stokes solve did not converge: " + w.status,
                         {{"epsilon", w.amplitude}, {"residual_norm", w.residual_norm}}};
    }
  }
  return r;
}

Json cmd_bands(const RunConfig& c, Files& files, int jobs) {
  auto wave = spectral_wave(c);
  TraceOptions o;
  o.bloch = bloch_options(c, static_cast<int>(c.integer("N")));
  o.jobs = jobs;
  auto atlas = trace_bands(wave, c.grid("mu_grid"), o);
  Csv csv({"mu", "re_lambda", "im_lambda", "band_id"});
  for (size_t i = 0; i < atlas.mu_grid.size(); ++i) {
    for (size_t b = 0; b < atlas.bands.size(); ++b) {
      const cplx z = atlas.bands[b][i];
      csv.row({num(atlas.mu_grid[i]), num(z.real()), num(z.imag()), num(static_cast<int>(b))});
    }
  }
  files.emplace_back("bands.csv", csv.text());
  Json slices = Json::array();
  double worst_pairing = 0.0;
  for (const auto& s : atlas.slices) {
    const double pd = pairing_defect(s.eigenvalues);
    worst_pairing = std::max(worst_pairing, pd);
    slices.push_back({{"mu", s.mu},
                      {"max_real_part", s.max_real_part},
                      {"unstable_count", s.unstable_count},
                      {"pairing_defect", pd}});
  }
  Json r;
  r["epsilon"] = wave.amplitude;
  r["speed"] = wave.speed;
  r["bands"] = atlas.bands.size();
  r["points"] = atlas.mu_grid.size();
  r["refinements"] = atlas.refinements;
  r["max_speed"] = atlas.max_speed;
  r["pairing_defect"] = worst_pairing;
  r["pairing_ok"] = worst_pairing <= c.real("pairing_tol");
  r["slices"] = slices;
  return r;
}

Json cmd_figure8(const RunConfig& c, Files& files, int jobs) {
  auto wave = spectral_wave(c);
  Figure8Options o;
  o.bloch = bloch_options(c, static_cast<int>(c.integer("N")));
  o.mu_max = c.real("figure8_mu_max");
  o.grid = static_cast<int>(c.integer("figure8_grid"));
  o.geometric = static_cast<int>(c.integer("figure8_geometric"));
  o.mu_tol = c.real("mu_tol");
  o.apex_tol = c.real("apex_tol");
  o.jobs = jobs;
  auto f = extract_figure8(wave, o);
  Csv csv({"mu", "re_lambda", "im_lambda"});
  for (const auto& s : f.samples)
    for (const auto& z : s.values) csv.row({num(s.mu), num(z.real()), num(z.imag())});
  files.emplace_back("figure8.csv", csv.text());
  const double eps = f.epsilon;
  Json r;
  r["epsilon"] = eps;
  r["exists"] = f.exists;
  r["reason"] = f.reason;
  r["apex_real"] = f.apex_real;
  r["apex_real_over_eps2"] = eps > 0 ? f.apex_real / (eps * eps) : 0.0;
  r["apex_lambda"] = cjson(f.apex_lambda);
  r["apex_mu"] = f.apex_mu;
  r["mu_bar"] = f.mu_bar;
  r["mu_bar_over_2sqrt2_eps"] = eps > 0 ? f.mu_bar / (2.0 * std::sqrt(2.0) * eps) : 0.0;
  r["unstable_regions"] = f.unstable_regions;
  r["slices"] = f.slices;
  return r;
}

Json cmd_isola(const RunConfig& c, Files& files, int jobs) {
  auto wave = spectral_wave(c);
  IsolaOptions o;
  o.bloch = bloch_options(c, static_cast<int>(c.integer("N")));
  o.samples = static_cast<int>(c.integer("isola_samples"));
  o.jobs = jobs;
  auto iso = extract_isola(wave, static_cast<int>(c.integer("isola_p")), o);
  Csv csv({"mu", "re_lambda", "im_lambda"});
  for (const auto& pt : iso.points) csv.row({num(pt.mu), num(pt.lambda.real()), num(pt.lambda.imag())});
  files.emplace_back("isola.csv", csv.text());
  Json r;
  r["p"] = iso.p;
  r["epsilon"] = iso.epsilon;
  r["found"] = iso.found;
  r["reason"] = iso.reason;
  r["mu_flat"] = iso.mu_flat;
  r["omega_star"] = iso.omega_star;
  r["center_imag"] = iso.center_imag;
  if (iso.found && iso.epsilon > 0)
    r["center_offset_over_eps2"] = (iso.center_imag - iso.omega_star) / (iso.epsilon * iso.epsilon);
  else
    r["center_offset_over_eps2"] = nullptr;
  r["semiaxis_real"] = iso.semiaxis_real;
  r["semiaxis_imag"] = iso.semiaxis_imag;
  r["mu_lo"] = iso.mu_lo;
  r["mu_hi"] = iso.mu_hi;
  r["max_real"] = iso.max_real;
  r["ellipse_residual"] = iso.ellipse_residual;
  r["slices"] = iso.slices;
  return r;
}

Json cmd_wbscan(const RunConfig& c, Files& files, int jobs) {
  WbOptions o;
  o.params = c.params();
  o.figure8.bloch = bloch_options(c, static_cast<int>(c.integer("wb_N")));
  o.figure8.grid = static_cast<int>(c.integer("wb_grid"));
  o.figure8.geometric = static_cast<int>(c.integer("figure8_geometric"));
  o.figure8.mu_max = c.real("figure8_mu_max");
  o.figure8.mu_tol = c.real("mu_tol");
  o.figure8.apex_tol = c.real("apex_tol");
  o.figure8.jobs = jobs;
  o.stokes = stokes_options(c, static_cast<int>(c.integer("stokes_N")));
  o.h_tol = c.real("h_tol");
  auto rep = scan_wb_threshold(c.grid("h_grid"), c.real("epsilon"), o);
  std::vector<WbSample> all = rep.grid;
  all.insert(all.end(), rep.bisection.begin(), rep.bisection.end());
  std::stable_sort(all.begin(), all.end(), [](const WbSample& a, const WbSample& b) { return a.h < b.h; });
  Csv csv({"h", "apex_real_over_eps2", "exists"});
  for (const auto& s : all) csv.row({num(s.h), num(s.apex_real_over_eps2), num(s.exists ? 1 : 0)});
  files.emplace_back("wbscan.csv", csv.text());
  auto samples = [](const std::vector<WbSample>& v) {
    Json a = Json::array();
    for (const auto& s : v)
      a.push_back({{"h", s.h}, {"exists", s.exists}, {"apex_real_over_eps2", s.apex_real_over_eps2}});
    return a;
  };
  Json r;
  r["epsilon"] = rep.epsilon;
  r["bracketed"] = rep.bracketed;
  if (rep.bracketed) r["threshold_h"] = rep.threshold_h;
  else r["threshold_h"] = nullptr;
  r["reason"] = rep.reason;
  r["grid"] = samples(rep.grid);
  r["bisection"] = samples(rep.bisection);
  return r;
}

Json cmd_kato(const RunConfig& c, Files& files, int jobs) {
  auto wave = spectral_wave(c);
  KatoOptions o;
  o.bloch = bloch_options(c, static_cast<int>(c.integer("N")));
  o.nodes = static_cast<int>(c.integer("kato_nodes"));
  o.max_nodes = static_cast<int>(c.integer("kato_max_nodes"));
  o.stability = c.real("kato_stability");
  o.jobs = jobs;
  auto k = kato_reduce(wave, c.real("mu"), o);
  Csv csv({"index", "re_reduced", "im_reduced", "re_full", "im_full"});
  for (int i = 0; i < 4; ++i) {
    csv.row({num(i), num(k.eigenvalues[i].real()), num(k.eigenvalues[i].imag()),
             num(k.full_nearest[i].real()), num(k.full_nearest[i].imag())});
  }
  files.emplace_back("kato.csv", csv.text());
  auto mat = [](const auto& m) {
    Json a = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(cjson(m(i, j)));
      a.push_back(row);
    }
    return a;
  };
  Json ev = Json::array(), full = Json::array();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    ev.push_back(cjson(k.eigenvalues[i]));
    full.push_back(cjson(k.full_nearest[i]));
    double d = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 4; ++m) d = std::min(d, std::abs(k.eigenvalues[i] - k.full_nearest[m]));
    worst = std::max(worst, d);
  }
  Json r;
  r["epsilon"] = k.epsilon;
  r["mu"] = k.mu;
  r["entries"] = mat(k.entries);
  r["E"] = mat(k.E);
  r["F"] = mat(k.F);
  r["G"] = mat(k.G);
  r["eigenvalues"] = ev;
  r["full_nearest"] = full;
  r["eigenvalue_mismatch"] = worst;
  r["center"] = cjson(k.center);
  r["radius"] = k.radius;
  r["nodes"] = k.nodes;
  r["rank"] = k.rank;
  r["trace"] = k.trace;
  r["defects"] = {{"idempotency", k.idempotency},
                  {"commutation", k.commutation},
                  {"skew_hamiltonian", k.skew_hamiltonian},
                  {"reversibility", k.reversibility},
                  {"symplectic", k.symplectic_defect},
                  {"basis_reversal", k.basis_reversal_defect},
                  {"hermitian", k.hermitian_defect},
                  {"invariance", k.invariance_defect},
                  {"quadrature_change", k.quadrature_change}};
  return r;
}

PeriodicFunction shifted(const PeriodicFunction& f, double shift) {
  auto g = f;
  for (int k = 1; k <= f.truncation(); ++k) g.set_coeff(k, f.coeff(k) * std::polar(1.0, -k * shift));
  return g;
}

Json cmd_evolve(const RunConfig& c, Files& files, int) {
  const auto p = c.params();
  const double eps = c.real("epsilon");
  const int N = static_cast<int>(c.integer("N"));
  double T = c.real("evolve_T");
  if (T == 0.0) {
    if (eps == 0.0) throw InvalidArgument("evolve_T must be set when epsilon = 0");
    T = 10.0 / eps;
  }
  const bool stokes = c.get("evolve_initial") == "stokes";
  WWState u0;
  double speed = 0.0;
  if (stokes) {
    auto w = converged_wave(c, eps, N);
    u0 = stokes_state(w, N);
    speed = w.speed;
  } else {
    u0 = {PeriodicFunction::cosine(N, eps), PeriodicFunction(N), 0.0};
  }
  EvolutionOptions o;
  o.N = N;
  o.order = static_cast<int>(c.integer("dno_order"));
  o.sobolev_s = c.real("sobolev_s");
  o.record_every = static_cast<int>(c.integer("record_every"));
  o.blowup_factor = c.real("blowup_factor");
  auto run_out = run(u0, c.real("evolve_dt"), T, p, o);
  Csv csv({"t", "norm_eta", "norm_psi", "hamiltonian", "mean_eta"});
  for (const auto& s : run_out.samples)
    csv.row({num(s.t), num(s.norm_eta), num(s.norm_psi), num(s.hamiltonian), num(s.mean_eta)});
  files.emplace_back("evolve.csv", csv.text());
  Json r;
  r["initial"] = c.get("evolve_initial");
  r["epsilon"] = eps;
  r["T"] = T;
  r["dt"] = run_out.dt;
  r["steps"] = run_out.steps;
  r["blew_up"] = run_out.blew_up;
  r["failure_time"] = run_out.failure_time;
  r["hamiltonian_drift"] = run_out.hamiltonian_drift;
  r["mean_drift"] = run_out.mean_drift;
  r["max_norm"] = run_out.max_norm;
  r["max_norm_over_eps"] = eps > 0 ? run_out.max_norm / eps : 0.0;
  if (stokes) {
    // exact solution: the initial profile translated by c t
    const double t = run_out.final_state.time;
    r["speed"] = speed;
    r["translation_error"] =
        std::max(max_coeff_diff(run_out.final_state.eta, shifted(u0.eta, speed * t)),
                 max_coeff_diff(run_out.final_state.psi, shifted(u0.psi, speed * t)));
  }
  if (run_out.blew_up) {
    throw Unsuccessful{"blow_up", "norm exceeded blowup_factor times its initial value",
                       {{"failure_time", run_out.failure_time}, {"max_norm", run_out.max_norm}}};
  }
  return r;
}

const std::vector<std::pair<std::string, Pipeline>>& table() {
  static const std::vector<std::pair<std::string, Pipeline>> t = {
      {"dispersion", cmd_dispersion}, {"resonance", cmd_resonance}, {"stokes", cmd_stokes},
      {"bands", cmd_bands},           {"figure8", cmd_figure8},     {"isola", cmd_isola},
      {"wbscan", cmd_wbscan},         {"kato", cmd_kato},           {"evolve", cmd_evolve},
  };
  return t;
}

Json error_json(const std::string& kind, const std::string& message,
                const std::map<std::string, double>& context) {
  Json ctx = Json::object();
  for (const auto& [k, v] : context) ctx[k] = v;
  return {{"kind", kind}, {"message", message}, {"context", ctx}};
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, f] : table()) n.push_back(k);
    return n;
  }();
  return names;
}

CommandOutput run_command(const std::string& command, const RunConfig& config, int jobs) {
  auto it = std::find_if(table().begin(), table().end(), [&](const auto& e) { return e.first == command; });
  if (it == table().end()) throw InvalidArgument("unknown command '" + command + "'");
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
  const int saved = default_jobs();
  set_default_jobs(jobs);

  CommandOutput out;
  Files files;
  Json report;
  report["command"] = command;
  report["schema_version"] = json_schema_version;
  Json result;
  Json error;
  try {
    result = it->second(config, files, jobs);
    out.status = "ok";
    out.exit_code = exit_ok;
  } catch (const Unsuccessful& u) {
    out.status = u.status;
    out.exit_code = exit_numerical;
    out.message = u.message;
    error = error_json(u.status, u.message, u.context);
  } catch (const NumericalFailure& e) {
    out.status = "numerical_failure";
    out.exit_code = exit_numerical;
    out.message = e.what();
    error = error_json("numerical_failure", e.what(), e.context());
  } catch (const InvalidArgument& e) {
    out.status = "invalid_argument";
    out.exit_code = exit_usage;
    out.message = e.what();
    error = error_json("invalid_argument", e.what(), {});
  }
  set_default_jobs(saved);
  report["status"] = out.status;
  report["config"] = config_json(config);
  if (!result.is_null()) report["result"] = result;
  if (!error.is_null()) report["error"] = error;
  if (out.exit_code != exit_ok) files.clear();
  out.files = std::move(files);
  out.files.emplace_back(command + ".json", report.dump(2) + "\n");
  return out;
}

void write_outputs(const CommandOutput& output, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + directory + "': " + ec.message());
  for (const auto& [name, content] : output.files) {
    const auto path = fs::path(directory) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

}  // namespace stokes_spectra
