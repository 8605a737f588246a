#include "stokes_spectra/stokes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "ww_impl.hpp"

namespace stokes_spectra {

using detail::Dual;
using detail::Series;

namespace {

// Unknowns: a_2..a_N (cos of eta), b_1..b_N (sin of psi), c.
struct Layout {
  int N;
  int size() const { return 2 * N; }
  int a(int k) const { return k - 2; }
  int b(int k) const { return N - 1 + k - 1; }
  int c() const { return 2 * N - 1; }
};

template <class T>
T seed(double value, int idx, int active) {
  if constexpr (std::is_same_v<T, Dual>) {
    return Dual(value, idx == active ? 1.0 : 0.0);
  } else {
    (void)idx;
    (void)active;
    return T(value);
  }
}

template <class T>
void unpack(const Eigen::VectorXd& x, double eps, const Layout& L, int active, Series<T>& eta,
            Series<T>& psi, T& c) {
  const int N = L.N;
  eta = Series<T>(N, 0.0);
  psi = Series<T>(N, 0.0);
  for (int k = 1; k <= N; ++k) {
    T ak = k == 1 ? T(eps) : seed<T>(x[L.a(k)], L.a(k), active);
    T bk = seed<T>(x[L.b(k)], L.b(k), active);
    eta.at(k) = 0.5 * ak;
    eta.at(-k) = 0.5 * ak;
    psi.at(k) = cplx(0.0, -0.5) * bk;
    psi.at(-k) = cplx(0.0, 0.5) * bk;
  }
  c = seed<T>(x[L.c()], L.c(), active);
}

template <class T>
std::pair<Series<T>, Series<T>> residual_series(const Series<T>& eta, const Series<T>& psi,
                                                const T& c, const PhysicalParams& prm,
                                                int order) {
  const int grid = detail::grid_size(eta.K);
  auto rhs = detail::ww_rhs(eta, psi, prm, order, grid);
  auto r1 = detail::apply_symbol(eta, detail::dx_symbol);
  auto r2 = detail::apply_symbol(psi, detail::dx_symbol);
  for (auto& z : r1.c) z = c * z;
  for (auto& z : r2.c) z = c * z;
  r1 = detail::add(r1, rhs.d_eta);
  r2 = detail::add(r2, rhs.d_psi);
  r2.at(0) = T(0.0);
  return {r1, r2};
}

double sup_of(const Series<cplx>& s) {
  auto g = detail::to_grid(s, detail::grid_size(s.K));
  double m = 0.0;
  for (const auto& z : g.v) m = std::max(m, std::abs(z));
  return m;
}

PeriodicFunction to_function(const Series<cplx>& s, Parity parity) {
  auto f = PeriodicFunction::from_coefficients(s.c, Parity::none);
  for (int k = 1; k <= s.K; ++k) f.set_coeff(k, 0.5 * (s.at(k) + std::conj(s.at(-k))));
  f.set_coeff(0, s.at(0).real());
  return parity == Parity::none ? f : f.projected(parity);
}

struct Evaluation {
  Eigen::VectorXd F;
  double norm;
  Series<cplx> r1, r2;
};

Evaluation evaluate(const Eigen::VectorXd& x, double eps, const Layout& L,
                    const PhysicalParams& prm, int order) {
  Series<cplx> eta, psi;
  cplx c;
  unpack<cplx>(x, eps, L, -1, eta, psi, c);
  auto [r1, r2] = residual_series(eta, psi, c, prm, order);
  Evaluation ev;
  ev.F.resize(L.size());
  for (int k = 1; k <= L.N; ++k) {
    ev.F[k - 1] = -2.0 * r1.at(k).imag();
    ev.F[L.N + k - 1] = 2.0 * r2.at(k).real();
  }
  ev.norm = sup_of(r1) + sup_of(r2);
  ev.r1 = r1;
  ev.r2 = r2;
  return ev;
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, double eps, const Layout& L,
                         const PhysicalParams& prm, int order) {
  Eigen::MatrixXd J(L.size(), L.size());
  for (int j = 0; j < L.size(); ++j) {
    Series<Dual> eta, psi;
    Dual c;
    unpack<Dual>(x, eps, L, j, eta, psi, c);
    auto [r1, r2] = residual_series(eta, psi, c, prm, order);
    for (int k = 1; k <= L.N; ++k) {
      J(k - 1, j) = -2.0 * r1.at(k).d.imag();
      J(L.N + k - 1, j) = 2.0 * r2.at(k).d.real();
    }
  }
  return J;
}

Eigen::VectorXd pack(const StokesWave& w, const Layout& L, double eps_new) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.size());
  const double ratio = w.amplitude != 0.0 ? eps_new / w.amplitude : 0.0;
  for (int k = 1; k <= L.N; ++k) {
    const double scale = std::pow(ratio, k);
    if (k >= 2) x[L.a(k)] = w.eta.cos_coeff(k) * scale;
    x[L.b(k)] = w.psi.sin_coeff(k) * scale;
  }
  const double ch = w.params.linear_speed();
  x[L.c()] = ch + (w.speed - ch) * ratio * ratio;
  return x;
}

StokesWave flat_wave(const PhysicalParams& params, const StokesOptions& o) {
  StokesWave w;
  w.amplitude = 0.0;
  w.eta = PeriodicFunction(o.N, Parity::even);
  w.psi = PeriodicFunction(o.N, Parity::odd);
  w.speed = params.linear_speed();
  w.params = params;
  w.N = o.N;
  w.order = o.order;
  w.converged = true;
  w.status = "flat state";
  return w;
}

}  // namespace

std::pair<int, double> nearest_linear_resonance(const PhysicalParams& params, int N) {
  const double c = params.linear_speed();
  int best = 2;
  double val = std::abs(omega_j(2, params) - 2.0 * c);
  for (int k = 3; k <= N; ++k) {
    const double d = std::abs(omega_j(k, params) - k * c);
    if (d < val) {
      val = d;
      best = k;
    }
  }
  return {best, val};
}

StokesWave solve_stokes(double epsilon, const PhysicalParams& params, const StokesOptions& o,
                        const StokesWave* warm_start) {
  params.validate();
  if (!std::isfinite(epsilon) || std::abs(epsilon) > 0.1) {
    throw InvalidArgument("solve_stokes: amplitude must satisfy |epsilon| <= 0.1");
  }
  if (o.N < 2) throw InvalidArgument("solve_stokes: N must be >= 2");
  if (!(o.tol > 0.0)) throw InvalidArgument("solve_stokes: tolerance must be positive");
  if (o.max_iter < 1) throw InvalidArgument("solve_stokes: max_iter must be >= 1");
  if (epsilon == 0.0) return flat_wave(params, o);
  {
    // Exact linear resonance makes the Jacobian singular at every small
    // amplitude; report it instead of iterating onto a ripple branch.
    auto [k, gap] = nearest_linear_resonance(params, o.N);
    if (gap <= 1e-10 * k * params.linear_speed()) {
      throw NumericalFailure("Stokes linearization singular: Wilton ripple resonance",
                             {{"kappa", params.surface_tension},
                              {"resonant_mode", static_cast<double>(k)},
                              {"linear_gap", gap},
                              {"epsilon", epsilon}});
    }
  }

  const Layout L{o.N};
  Eigen::VectorXd x;
  if (warm_start && warm_start->N == o.N && warm_start->amplitude != 0.0) {
    x = pack(*warm_start, L, epsilon);
  } else {
    x = Eigen::VectorXd::Zero(L.size());
    const double c = params.linear_speed();
    x[L.c()] = c;
    x[L.b(1)] = c * epsilon / symbol_g0(1.0, params.depth);
  }

  StokesWave w;
  w.amplitude = epsilon;
  w.params = params;
  w.N = o.N;
  w.order = o.order;

  auto ev = evaluate(x, epsilon, L, params, o.order);
  w.initial_residual = ev.norm;
  Eigen::VectorXd best_x = x;
  double best = ev.norm;
  int it = 0;
  while (ev.norm > o.tol && it < o.max_iter) {
    Eigen::MatrixXd J = jacobian(x, epsilon, L, params, o.order);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    const double rc = lu.rcond();
    if (!(rc > o.singular_rcond)) {
      auto [k, gap] = nearest_linear_resonance(params, o.N);
      throw NumericalFailure("Stokes Jacobian singular (Wilton-type resonance)",
                             {{"kappa", params.surface_tension},
                              {"resonant_mode", static_cast<double>(k)},
                              {"linear_gap", gap},
                              {"rcond", rc},
                              {"epsilon", epsilon}});
    }
    x -= lu.solve(ev.F);
    ++it;
    ev = evaluate(x, epsilon, L, params, o.order);
    if (!std::isfinite(ev.norm)) break;
    if (ev.norm < best) {
      best = ev.norm;
      best_x = x;
    }
  }
  if (!(ev.norm <= best)) {
    x = best_x;
    ev = evaluate(x, epsilon, L, params, o.order);
  }

  Series<cplx> eta, psi;
  cplx c;
  unpack<cplx>(x, epsilon, L, -1, eta, psi, c);
  w.eta = to_function(eta, Parity::even);
  w.psi = to_function(psi, Parity::odd);
  w.speed = c.real();
  w.residual_norm = ev.norm;
  w.iterations = it;
  w.converged = ev.norm <= o.tol;
  w.status = w.converged ? "converged" : "not converged";
  return w;
}

std::vector<StokesWave> continue_in_amplitude(const std::vector<double>& eps_grid,
                                              const PhysicalParams& params,
                                              const StokesOptions& options) {
  if (eps_grid.empty()) throw InvalidArgument("continuation grid is empty");
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end()) || eps_grid.front() < 0.0) {
    throw InvalidArgument("continuation grid must be sorted ascending from 0");
  }
  std::vector<StokesWave> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const StokesWave* prev = out.empty() ? nullptr : &out.back();
    StokesWave w;
    try {
      w = solve_stokes(eps, params, options, prev);
    } catch (const NumericalFailure& e) {
      auto ctx = e.context();
      ctx["epsilon"] = eps;
      throw NumericalFailure(e.what(), ctx);
    }
    if (!w.converged) {
      throw NumericalFailure("continuation: Newton did not converge",
                             {{"epsilon", eps}, {"residual", w.residual_norm}});
    }
    out.push_back(std::move(w));
  }
  return out;
}

SurfaceVelocity velocity_trace(const StokesWave& wave, int modes) {
  const int K = modes > 0 ? modes : wave.N;
  const int grid = detail::grid_size(K);
  Series<cplx> eta(K, 0.0), psi(K, 0.0);
  for (int k = -K; k <= K; ++k) {
    eta.at(k) = wave.eta.coeff(k);
    psi.at(k) = wave.psi.coeff(k);
  }
  detail::DnoEngine<cplx> dno(eta, wave.order, wave.params.depth, grid);
  auto gp = detail::to_grid(dno.apply(psi), grid);
  auto ex = detail::to_grid(detail::apply_symbol(eta, detail::dx_symbol), grid);
  auto px = detail::to_grid(detail::apply_symbol(psi, detail::dx_symbol), grid);
  detail::Samples<cplx> b(grid, 0.0), v(grid, 0.0);
  for (int i = 0; i < grid; ++i) {
    b.v[i] = (gp.v[i] + ex.v[i] * px.v[i]) / (1.0 + ex.v[i] * ex.v[i]);
    v.v[i] = px.v[i] - b.v[i] * ex.v[i];
  }
  SurfaceVelocity out;
  out.B = to_function(detail::to_series(b, K), Parity::odd);
  out.V = to_function(detail::to_series(v, K), Parity::even);
  return out;
}

TravelingResidual traveling_residual(const PeriodicFunction& eta, const PeriodicFunction& psi,
                                     double speed, const PhysicalParams& params, int order) {
  const int K = std::max(eta.truncation(), psi.truncation());
  Series<cplx> e(K, 0.0), p(K, 0.0);
  for (int k = -K; k <= K; ++k) {
    e.at(k) = eta.coeff(k);
    p.at(k) = psi.coeff(k);
  }
  auto [r1, r2] = residual_series(e, p, cplx(speed), params, order);
  TravelingResidual out;
  out.r_eta = to_function(r1, Parity::none);
  out.r_psi = to_function(r2, Parity::none);
  out.norm = sup_of(r1) + sup_of(r2);
  return out;
}

}  // namespace stokes_spectra
