#include "stokes_spectra/dno.hpp"

#include <cmath>

#include "dno_impl.hpp"
#include "stokes_spectra/parallel.hpp"

namespace stokes_spectra {

namespace {

void check_eta(const PeriodicFunction& eta) {
  eta.validate();
  if (eta.complex_valued()) throw InvalidArgument("dno: eta must be real");
  if (std::abs(eta.mean()) > 1e-12 * std::max(1.0, eta.sup_norm())) {
    throw InvalidArgument("dno: eta must have zero mean");
  }
}

detail::Series<cplx> as_series(const PeriodicFunction& f, int K, double mu = 0.0) {
  detail::Series<cplx> s(K, mu);
  for (int k = -K; k <= K; ++k) s.at(k) = f.coeff(k);
  return s;
}

}  // namespace

PeriodicFunction dno_apply(const PeriodicFunction& eta, const PeriodicFunction& psi, int order,
                           const Depth& depth, DnoDiagnostics* diagnostics) {
  check_eta(eta);
  psi.validate();
  const int K = std::max(eta.truncation(), psi.truncation());
  detail::DnoEngine<cplx> engine(as_series(eta, K), order, depth, detail::grid_size(K));
  std::vector<double> norms;
  auto out = engine.apply(as_series(psi, K), &norms);
  if (diagnostics) diagnostics->term_norms = norms;
  std::vector<cplx> c = out.c;
  c[K] = 0.0;
  Parity p = Parity::none;
  if (eta.parity() == Parity::even && psi.parity() != Parity::none) p = psi.parity();
  auto f = PeriodicFunction::from_coefficients(std::move(c), Parity::none, psi.complex_valued());
  if (!psi.complex_valued()) {
    // Enforce exact reality; roundoff asymmetry is ~1e-17.
    for (int k = 1; k <= K; ++k) {
      const cplx avg = 0.5 * (f.coeff(k) + std::conj(f.coeff(-k)));
      f.set_coeff(k, avg);
    }
  }
  if (p != Parity::none) f = f.projected(p);
  return f;
}

ComplexMatrixOp dno_matrix(const PeriodicFunction& eta, double mu, int N, int order,
                           const Depth& depth, int pad) {
  check_eta(eta);
  if (N < 1) throw InvalidArgument("dno_matrix: N must be positive");
  if (pad < 0) throw InvalidArgument("dno_matrix: negative padding");
  if (!std::isfinite(mu)) throw InvalidArgument("dno_matrix: mu must be finite");
  const int K = N + pad;
  detail::DnoEngine<cplx> engine(as_series(eta, K), order, depth, detail::grid_size(K));
  ComplexMatrixOp op;
  op.N = N;
  op.mu = mu;
  op.components = 1;
  op.entries = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  parallel_for(2 * N + 1, [&](int col) {
    detail::Series<cplx> e(K, mu);
    e.at(col - N) = 1.0;
    auto g = engine.apply(e);
    for (int k = -N; k <= N; ++k) op.entries(k + N, col) = g.at(k);
  });
  return op;
}

}  // namespace stokes_spectra
