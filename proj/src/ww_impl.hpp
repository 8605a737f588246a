#pragma once

// Right-hand side of the water-wave system in Zakharov-Craig-Sulem
// variables, templated so that dual fields give exact directional
// derivatives of the discrete system.

#include <utility>

#include "dno_impl.hpp"
#include "stokes_spectra/params.hpp"

namespace stokes_spectra::detail {

inline cplx dx_symbol(double xi) { return cplx(0.0, xi); }
inline cplx dx_inverse_symbol(double xi) { return xi == 0.0 ? cplx(0.0) : cplx(0.0, -1.0 / xi); }

template <class T>
struct WWRhs {
  Series<T> d_eta;
  Series<T> d_psi;
  Series<T> g_psi;
};

/// (eta_t, psi_t) for the lab frame. The mean of d_psi (the Bernoulli
/// constant) is left in; callers drop it.
template <class T>
WWRhs<T> ww_rhs(const Series<T>& eta, const Series<T>& psi, const PhysicalParams& prm, int order,
                int grid, std::vector<double>* terms = nullptr, bool check = true) {
  const int K = eta.K;
  DnoEngine<T> dno(eta, order, prm.depth, grid);
  auto gpsi = dno.apply(psi, terms, check);
  auto eta_x = apply_symbol(eta, dx_symbol);
  auto psi_x = apply_symbol(psi, dx_symbol);

  auto ex = to_grid(eta_x, grid);
  auto px = to_grid(psi_x, grid);
  auto gp = to_grid(gpsi, grid);
  auto eg = to_grid(eta, grid);

  const double g = prm.gravity;
  const double kappa = prm.surface_tension;
  const double gamma = prm.vorticity;

  Samples<T> s2(grid, product_mu<T>(eta.mu, psi.mu));
  for (int i = 0; i < grid; ++i) {
    const T z = ex.v[i] * px.v[i] + gp.v[i];
    const T one_plus = T(1.0) + ex.v[i] * ex.v[i];
    s2.v[i] = -0.5 * (px.v[i] * px.v[i]) + 0.5 * (z * z) / one_plus;
    if (gamma != 0.0) s2.v[i] += gamma * (eg.v[i] * px.v[i]);
  }
  auto n2 = to_series(s2, K);
  n2 = add(n2, eta, -g);
  if (kappa != 0.0) {
    auto curv = map(ex, [](const T& a) { return a / sqrt(T(1.0) + a * a); });
    n2 = add(n2, apply_symbol(to_series(curv, K), dx_symbol), kappa);
  }
  auto n1 = gpsi;
  if (gamma != 0.0) {
    n2 = add(n2, apply_symbol(gpsi, dx_inverse_symbol), gamma);
    auto eex = mul(eg, ex);
    n1 = add(n1, to_series(eex, K), gamma);
  }
  return {n1, n2, gpsi};
}

}  // namespace stokes_spectra::detail
