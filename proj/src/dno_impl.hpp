#pragma once

// Graph expansion of the Dirichlet-Neumann operator,
//   Phi_0 = psi,  Phi_n = -sum_{m=1..n} P[eta^m/m! A_m Phi_{n-m}],
//   G_n psi = G0 Phi_n + D sum_{m=0..n-1} P[eta^{m+1}/(m+1)! D A_m Phi_{n-1-m}],
// with A_m = D^m (m even), D^{m-1} G0 (m odd), D = -i d/dx. Every symbol
// is evaluated at k + mu.

#include <algorithm>
#include <cmath>
#include <vector>

#include "spectral.hpp"
#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/params.hpp"

namespace stokes_spectra::detail {

template <class T>
class DnoEngine {
 public:
  DnoEngine(const Series<T>& eta, int order, const Depth& depth, int grid)
      : order_(order), depth_(depth), n_(grid), K_(eta.K) {
    if (order < 0) throw InvalidArgument("dno order must be nonnegative");
    auto eg = to_grid(eta, n_);
    powers_.reserve(order + 1);
    Samples<T> acc(n_, eta.mu);
    for (auto& v : acc.v) v = T(1.0);
    powers_.push_back(acc);
    for (int m = 1; m <= order; ++m) {
      acc = mul(acc, eg);
      for (auto& v : acc.v) v *= 1.0 / m;
      powers_.push_back(acc);
    }
  }

  int modes() const { return K_; }
  int grid() const { return n_; }

  Series<T> apply(const Series<T>& psi, std::vector<double>* terms = nullptr,
                  bool check = true) const {
    if (psi.K != K_) throw InvalidArgument("dno: eta and psi truncations differ");
    const auto g0 = [this](double xi) { return cplx(symbol_g0(xi, depth_)); };
    const auto d = [](double xi) { return cplx(xi); };
    std::vector<Series<T>> phi;
    phi.reserve(order_ + 1);
    phi.push_back(psi);
    Series<T> total = apply_symbol(psi, g0);
    std::vector<double> norms{norm_of(total)};
    for (int n = 1; n <= order_; ++n) {
      Series<T> acc(K_, psi.mu);
      for (int m = 1; m <= n; ++m) {
        acc = add(acc, weighted(m, a_op(m, phi[n - m], g0)), -1.0);
      }
      phi.push_back(acc);
      Series<T> inner(K_, psi.mu);
      for (int m = 0; m < n; ++m) {
        inner = add(inner, weighted(m + 1, apply_symbol(a_op(m, phi[n - 1 - m], g0), d)));
      }
      Series<T> term = add(apply_symbol(phi[n], g0), apply_symbol(inner, d));
      norms.push_back(norm_of(term));
      total = add(total, term);
    }
    if (check) check_decay(norms, norm_of(psi));
    if (terms) *terms = norms;
    return total;
  }

 private:
  template <class G0>
  Series<T> a_op(int m, const Series<T>& s, G0 g0) const {
    Series<T> out = s;
    const int dpow = (m % 2 == 0) ? m : m - 1;
    if (m % 2 == 1) out = apply_symbol(out, g0);
    if (dpow > 0) {
      out = apply_symbol(out, [dpow](double xi) { return cplx(std::pow(xi, dpow)); });
    }
    return out;
  }

  Series<T> weighted(int m, const Series<T>& s) const {
    return to_series(mul(powers_[m], to_grid(s, n_)), K_);
  }

  // Two consecutive rises signal divergence when the rising terms are
  // non-negligible (above 1e-6 of the leading term), or when the growth is
  // still going on at the last order kept. High-frequency columns have
  // G_m = 0 for small m, so a rise out of roundoff alone is not an alarm.
  void check_decay(const std::vector<double>& norms, double psi_norm) const {
    const double scale = std::max(norms[0], psi_norm);
    const double noise = 1e-13 * scale;
    const double significant = 1e-6 * scale;
    const size_t M = norms.size() - 1;
    int rises = 0;
    for (size_t m = 1; m <= M; ++m) {
      const bool up = norms[m] > norms[m - 1] && norms[m] > significant;
      rises = up ? rises + 1 : 0;
      if (rises >= 2) fail(m, norms);
    }
    if (M >= 2 && norms[M] > norms[M - 1] && norms[M - 1] > norms[M - 2] && norms[M] > noise) {
      fail(M, norms);
    }
  }

  [[noreturn]] void fail(size_t m, const std::vector<double>& norms) const {
    throw NumericalFailure("DN expansion diverging: term norms grew for two consecutive orders",
                           {{"order", static_cast<double>(m)},
                            {"term_norm", norms[m]},
                            {"previous_norm", norms[m - 1]}});
  }

  int order_;
  Depth depth_;
  int n_;
  int K_;
  std::vector<Samples<T>> powers_;
};

}  // namespace stokes_spectra::detail
