#include "stokes_spectra/evolution.hpp"

#include <array>
#include <cmath>

#include "spectral.hpp"
#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "ww_impl.hpp"

namespace stokes_spectra {

using detail::Series;

namespace {

Series<cplx> to_series(const PeriodicFunction& f, int K) {
  Series<cplx> s(K, 0.0);
  const int m = std::min(K, f.truncation());
  for (int k = -m; k <= m; ++k) s.at(k) = f.coeff(k);
  return s;
}

// Hermitian part, so roundoff never leaves the real subspace.
void make_real(Series<cplx>& s) {
  for (int k = 1; k <= s.K; ++k) {
    const cplx a = 0.5 * (s.at(k) + std::conj(s.at(-k)));
    s.at(k) = a;
    s.at(-k) = std::conj(a);
  }
  s.at(0) = s.at(0).real();
}

PeriodicFunction to_function(Series<cplx> s) {
  make_real(s);
  return PeriodicFunction::from_coefficients(s.c);
}

struct Pair {
  Series<cplx> eta, psi;
};

Pair axpy(const Pair& a, const Pair& b, double s) {
  return {detail::add(a.eta, b.eta, s), detail::add(a.psi, b.psi, s)};
}

// Linear part per mode: eta_t = g0 psi, psi_t = -(g + kappa k^2) eta - i gamma g0 / k psi.
struct Linear {
  std::vector<std::array<cplx, 4>> a;  // row major, one per k = -K..K

  Linear(int K, const PhysicalParams& p) : a(2 * K + 1) {
    for (int k = -K; k <= K; ++k) {
      auto& m = a[k + K];
      if (k == 0) {
        m = {cplx(0), cplx(0), cplx(0), cplx(0)};
        continue;
      }
      const double g0 = symbol_g0(k, p.depth);
      m = {cplx(0), cplx(g0), cplx(-(p.gravity + p.surface_tension * k * k)),
           cplx(0.0, -p.vorticity * g0 / k)};
    }
  }

  Pair apply(const Pair& u) const {
    Pair out{Series<cplx>(u.eta.K, 0.0), Series<cplx>(u.eta.K, 0.0)};
    for (int k = -u.eta.K; k <= u.eta.K; ++k) {
      const auto& m = a[k + u.eta.K];
      out.eta.at(k) = m[0] * u.eta.at(k) + m[1] * u.psi.at(k);
      out.psi.at(k) = m[2] * u.eta.at(k) + m[3] * u.psi.at(k);
    }
    return out;
  }

  // exp(A h) = e^{tau h/2} (cos(w h) I + sin(w h)/w (A - tau/2 I)), w^2 = det - tau^2/4
  std::vector<std::array<cplx, 4>> propagator(double h) const {
    std::vector<std::array<cplx, 4>> e(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      const auto& m = a[i];
      const cplx tau = m[0] + m[3];
      const cplx det = m[0] * m[3] - m[1] * m[2];
      const double w = std::sqrt(std::max(0.0, (det - 0.25 * tau * tau).real()));
      const cplx pre = std::exp(0.5 * tau * h);
      const double c = std::cos(w * h);
      const double s = w > 0.0 ? std::sin(w * h) / w : h;
      e[i] = {pre * (c + s * (m[0] - 0.5 * tau)), pre * s * m[1], pre * s * m[2],
              pre * (c + s * (m[3] - 0.5 * tau))};
    }
    return e;
  }
};

Pair propagate(const std::vector<std::array<cplx, 4>>& e, const Pair& u) {
  Pair out = u;
  const int K = u.eta.K;
  for (int k = -K; k <= K; ++k) {
    const auto& m = e[k + K];
    out.eta.at(k) = m[0] * u.eta.at(k) + m[1] * u.psi.at(k);
    out.psi.at(k) = m[2] * u.eta.at(k) + m[3] * u.psi.at(k);
  }
  return out;
}

Pair full_rhs(const Pair& u, const PhysicalParams& p, int order) {
  auto r = detail::ww_rhs(u.eta, u.psi, p, order, detail::grid_size(u.eta.K));
  r.d_psi.at(0) = 0.0;
  return {r.d_eta, r.d_psi};
}

struct Stepper {
  const PhysicalParams& p;
  int order;
  Linear lin;
  std::vector<std::array<cplx, 4>> e, e2;
  double h;

  Stepper(const PhysicalParams& prm, int order_, int K, double h_)
      : p(prm), order(order_), lin(K, prm), e(lin.propagator(h_)), e2(lin.propagator(0.5 * h_)),
        h(h_) {}

  Pair nonlinear(const Pair& u) const { return axpy(full_rhs(u, p, order), lin.apply(u), -1.0); }

  Pair step(const Pair& u) const {
    const Pair k1 = nonlinear(u);
    const Pair k2 = nonlinear(propagate(e2, axpy(u, k1, 0.5 * h)));
    const Pair eu2 = propagate(e2, u);
    const Pair k3 = nonlinear(axpy(eu2, k2, 0.5 * h));
    const Pair k4 = nonlinear(axpy(propagate(e, u), propagate(e2, k3), h));
    Pair acc = propagate(e, axpy(u, k1, h / 6.0));
    acc = axpy(acc, propagate(e2, axpy(k2, k3, 1.0)), h / 3.0);
    return axpy(acc, k4, h / 6.0);
  }
};

double energy(const Series<cplx>& eta, const Series<cplx>& psi, const PhysicalParams& p, int order) {
  const int K = eta.K;
  const int n = detail::grid_size(K);
  detail::DnoEngine<cplx> dno(eta, order, p.depth, n);
  auto gpsi = dno.apply(psi);
  double kin = 0.0, pot = 0.0;
  for (int k = -K; k <= K; ++k) {
    kin += (std::conj(psi.at(k)) * gpsi.at(k)).real();
    pot += std::norm(eta.at(k));
  }
  double H = 2.0 * M_PI * (0.5 * kin + 0.5 * p.gravity * pot);
  if (p.surface_tension != 0.0 || p.vorticity != 0.0) {
    auto eg = detail::to_grid(eta, n);
    auto ex = detail::to_grid(detail::apply_symbol(eta, detail::dx_symbol), n);
    auto px = detail::to_grid(detail::apply_symbol(psi, detail::dx_symbol), n);
    double cap = 0.0, vor = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = eg.v[i].real(), x = ex.v[i].real();
      cap += std::sqrt(1.0 + x * x);
      vor += -px.v[i].real() * e * e + p.vorticity / 3.0 * e * e * e;
    }
    H += 2.0 * M_PI / n * (p.surface_tension * cap + 0.5 * p.vorticity * vor);
  }
  return H;
}

}  // namespace

std::pair<PeriodicFunction, PeriodicFunction> rhs(const WWState& state, const PhysicalParams& params,
                                                  int order) {
  params.validate();
  const int K = std::max(state.eta.truncation(), state.psi.truncation());
  auto r = full_rhs({to_series(state.eta, K), to_series(state.psi, K)}, params, order);
  return {to_function(r.eta), to_function(r.psi)};
}

double hamiltonian(const WWState& state, const PhysicalParams& params, int order) {
  params.validate();
  const int K = std::max(state.eta.truncation(), state.psi.truncation());
  return energy(to_series(state.eta, K), to_series(state.psi, K), params, order);
}

double default_dt(int N, const PhysicalParams& params) {
  if (N < 1) throw InvalidArgument("truncation must be positive");
  return 0.25 * 2.0 * M_PI / omega_j(N, params);
}

WWState reversed(const WWState& state) {
  WWState out = state;
  auto flip = [](const PeriodicFunction& f, double sign) {
    std::vector<cplx> c(f.coefficients().rbegin(), f.coefficients().rend());
    for (auto& z : c) z *= sign;
    return PeriodicFunction::from_coefficients(c);
  };
  out.eta = flip(state.eta, 1.0);
  out.psi = flip(state.psi, -1.0);
  return out;
}

WWState stokes_state(const StokesWave& wave, int N) {
  if (!wave.converged) throw InvalidArgument("stokes wave not converged");
  return {wave.eta.resized(N), wave.psi.resized(N), 0.0};
}

EvolutionRun run(const WWState& initial, double dt, double T, const PhysicalParams& params,
                 const EvolutionOptions& options) {
  params.validate();
  if (options.N < 1) throw InvalidArgument("truncation must be positive");
  if (options.order < 0) throw InvalidArgument("dno order must be nonnegative");
  if (options.record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (!(options.blowup_factor > 1.0)) throw InvalidArgument("blowup_factor must exceed 1");
  if (!std::isfinite(T) || !std::isfinite(dt)) throw InvalidArgument("dt and T must be finite");
  double step = std::abs(dt) > 0.0 ? std::abs(dt) : default_dt(options.N, params);
  const int steps = T == 0.0 ? 0 : static_cast<int>(std::ceil(std::abs(T) / step - 1e-12));
  const double h = steps > 0 ? T / steps : 0.0;

  const int K = options.N;
  Pair u{to_series(initial.eta, K), to_series(initial.psi, K)};
  make_real(u.eta);
  make_real(u.psi);
  u.psi.at(0) = 0.0;
  const double mean0 = u.eta.at(0).real();
  u.eta.at(0) = mean0;

  EvolutionRun out;
  out.dt = h;
  const double s = options.sobolev_s;
  double H0 = 0.0, norm0 = 0.0;
  auto sample = [&](double t, const Pair& v, double mean) {
    auto e = to_function(v.eta), q = to_function(v.psi);
    EvolutionSample r;
    r.t = t;
    r.norm_eta = e.sobolev_norm(s + 0.25);
    r.norm_psi = q.sobolev_norm(s - 0.25, true);
    r.hamiltonian = energy(v.eta, v.psi, params, options.order);
    r.mean_eta = mean;
    return r;
  };
  double t = initial.time;
  try {
    auto first = sample(initial.time, u, mean0);
    H0 = first.hamiltonian;
    norm0 = first.norm_eta + first.norm_psi;
    out.samples.push_back(first);
    out.max_norm = norm0;

    Stepper stepper(params, options.order, K, h);
    for (int n = 1; n <= steps; ++n) {
      u = stepper.step(u);
      t = initial.time + n * h;
      make_real(u.eta);
      make_real(u.psi);
      const double mean = u.eta.at(0).real();
      u.eta.at(0) = mean0;
      u.psi.at(0) = 0.0;
      out.steps = n;

      auto e = to_function(u.eta), q = to_function(u.psi);
      const double norm = e.sobolev_norm(s + 0.25) + q.sobolev_norm(s - 0.25, true);
      out.mean_drift = std::max(out.mean_drift, std::abs(mean - mean0));
      out.max_norm = std::max(out.max_norm, norm);
      const bool blown =
          !std::isfinite(norm) || (norm0 > 0.0 && norm > options.blowup_factor * norm0);
      if (blown || n % options.record_every == 0 || n == steps) {
        auto r = sample(t, u, mean);
        if (std::isfinite(r.hamiltonian) && H0 != 0.0) {
          const double drift = std::abs(r.hamiltonian - H0) / std::abs(H0);
          out.hamiltonian_drift = std::max(out.hamiltonian_drift, drift);
        }
        out.samples.push_back(r);
      }
      if (blown) {
        out.blew_up = true;
        out.failure_time = t;
        break;
      }
    }
  } catch (const NumericalFailure& err) {
    auto ctx = err.context();
    ctx["time"] = t;
    throw NumericalFailure(err.what(), ctx);
  }
  out.final_state = {to_function(u.eta), to_function(u.psi), t};
  return out;
}

}  // namespace stokes_spectra
