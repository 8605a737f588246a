#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stokes_spectra/field.hpp"
#include "stokes_spectra/params.hpp"

namespace stokes_spectra {

/// Dense operator on the Bloch basis e^{i(k+mu)x}, |k| <= N, stacked
/// `components` times (1 for scalar operators, 2 for (eta, psi) systems).
struct ComplexMatrixOp {
  Eigen::MatrixXcd entries;
  int N = 0;
  double mu = 0.0;
  int components = 1;

  int dimension() const { return static_cast<int>(entries.rows()); }
  /// Row/column index of mode k in component comp.
  int index(int comp, int k) const { return comp * (2 * N + 1) + k + N; }
};

struct DnoDiagnostics {
  /// ||G_m psi|| for m = 0..order (l2 of coefficients).
  std::vector<double> term_norms;
};

/// Sum of the first order+1 terms of the graph expansion of G(eta) psi.
/// eta must be real and zero-mean; the result is real and zero-mean.
/// Throws NumericalFailure when the term norms grow two orders in a row.
PeriodicFunction dno_apply(const PeriodicFunction& eta, const PeriodicFunction& psi, int order,
                           const Depth& depth, DnoDiagnostics* diagnostics = nullptr);

/// Matrix of e^{-i mu x} G(eta) e^{i mu x} on |k| <= N. Columns are computed
/// on N + pad modes and trimmed.
ComplexMatrixOp dno_matrix(const PeriodicFunction& eta, double mu, int N, int order,
                           const Depth& depth, int pad = 16);

}  // namespace stokes_spectra
