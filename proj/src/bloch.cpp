#include "stokes_spectra/bloch.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <lapacke.h>

#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/parallel.hpp"
#include "ww_impl.hpp"

namespace stokes_spectra {

using detail::Series;
using Mat = Eigen::MatrixXcd;

namespace {

Series<cplx> series_of(const PeriodicFunction& f, int K) {
  Series<cplx> s(K, 0.0);
  for (int k = -K; k <= K; ++k) s.at(k) = f.coeff(k);
  return s;
}

// (T_f)_{kl} = f_{k-l} on |k|, |l| <= K; f carries modes up to 2K.
Mat toeplitz(const Series<cplx>& f, int K) {
  const int m = 2 * K + 1;
  Mat t = Mat::Zero(m, m);
  for (int k = -K; k <= K; ++k) {
    for (int l = -K; l <= K; ++l) {
      const int d = k - l;
      if (d >= -f.K && d <= f.K) t(k + K, l + K) = f.at(d);
    }
  }
  return t;
}

Eigen::VectorXcd dx_diag(int K, double mu) {
  Eigen::VectorXcd d(2 * K + 1);
  for (int k = -K; k <= K; ++k) d[k + K] = cplx(0.0, k + mu);
  return d;
}

Eigen::VectorXcd dx_inv_diag(int K, double mu) {
  Eigen::VectorXcd d(2 * K + 1);
  for (int k = -K; k <= K; ++k) d[k + K] = detail::dx_inverse_symbol(k + mu);
  return d;
}

Mat trim(const Mat& a, int Ke, int N) {
  return a.block(Ke - N, Ke - N, 2 * N + 1, 2 * N + 1);
}

void check_wave(const StokesWave& wave) {
  if (!wave.converged) {
    throw InvalidArgument("Bloch operator requires a converged wave");
  }
}

}  // namespace

Mat structure_inverse(int N, double mu, double gamma) {
  const int m = 2 * N + 1;
  Mat k = Mat::Zero(2 * m, 2 * m);
  k.block(0, m, m, m) = -Mat::Identity(m, m);
  k.block(m, 0, m, m) = Mat::Identity(m, m);
  if (gamma != 0.0) k.block(0, 0, m, m) = (gamma * dx_inv_diag(N, mu)).asDiagonal();
  return k;
}

Mat structure(int N, double mu, double gamma) {
  const int m = 2 * N + 1;
  Mat j = Mat::Zero(2 * m, 2 * m);
  j.block(0, m, m, m) = Mat::Identity(m, m);
  j.block(m, 0, m, m) = -Mat::Identity(m, m);
  if (gamma != 0.0) j.block(m, m, m, m) = (gamma * dx_inv_diag(N, mu)).asDiagonal();
  return j;
}

Mat reversal_sign(int N) {
  const int m = 2 * N + 1;
  Mat s = Mat::Identity(2 * m, 2 * m);
  s.block(m, m, m, m) *= -1.0;
  return s;
}

BlochOperator assemble(const StokesWave& wave, double mu, const BlochOptions& o) {
  check_wave(wave);
  if (o.N < 1 || o.pad < 0) throw InvalidArgument("assemble: bad truncation");
  if (!std::isfinite(mu)) throw InvalidArgument("assemble: mu must be finite");
  const PhysicalParams& prm = wave.params;
  const int N = o.N;
  const int Ke = N + o.pad;
  const int Kf = 2 * Ke;
  const int grid = detail::grid_size(Kf);

  auto vb = velocity_trace(wave, Kf);
  auto eta = series_of(wave.eta, Kf);
  auto psi_x = series_of(wave.psi.derivative(), Kf);
  auto V = series_of(vb.V, Kf);
  auto B = series_of(vb.B, Kf);
  auto Vx = detail::apply_symbol(V, detail::dx_symbol);
  auto BVx = detail::product(B, Vx, grid);

  Mat G = dno_matrix(wave.eta.resized(std::max(wave.eta.truncation(), Ke)), mu, Ke, o.order,
                     prm.depth, o.pad)
              .entries;
  // The graph expansion is self-adjoint only up to roundoff; for an even
  // profile its matrix is also real. Exact structure keeps the spectrum
  // symmetric under lambda -> -conj(lambda).
  G = 0.5 * (G + G.adjoint()).eval();
  if (wave.eta.parity() == Parity::even) G = G.real().cast<cplx>();

  const int m = 2 * Ke + 1;
  const Mat I = Mat::Identity(m, m);
  const Eigen::VectorXcd d_vec = dx_diag(Ke, mu);
  const Eigen::VectorXcd dinv_vec = dx_inv_diag(Ke, mu);
  const auto D = d_vec.asDiagonal();
  const auto Dinv = dinv_vec.asDiagonal();
  const Mat TV = toeplitz(V, Ke);
  const Mat TB = toeplitz(B, Ke);
  const Mat TBVx = toeplitz(BVx, Ke);
  const double c = wave.speed;
  const double g = prm.gravity;
  const double kappa = prm.surface_tension;
  const double gamma = prm.vorticity;

  Mat L11 = c * Mat(D) - D * TV - G * TB;
  Mat L12 = G;
  Mat L21 = -g * I - TBVx - TB * G * TB;
  Mat L22 = c * Mat(D) - TV * D + TB * G;
  if (kappa != 0.0) {
    auto ex = detail::to_grid(detail::apply_symbol(eta, detail::dx_symbol), grid);
    auto w = detail::map(ex, [](const cplx& a) { return std::pow(1.0 + a * a, -1.5); });
    L21 += kappa * (D * toeplitz(detail::to_series(w, Kf), Ke) * D);
  }
  if (gamma != 0.0) {
    const Mat Teta = toeplitz(eta, Ke);
    Eigen::VectorXcd pi(m);
    for (int k = -Ke; k <= Ke; ++k) pi[k + Ke] = (k + mu == 0.0) ? 0.0 : 1.0;
    L11 += gamma * (D * Teta);
    L21 += gamma * (toeplitz(psi_x, Ke) - Dinv * G * TB - pi.asDiagonal() * TV);
    L22 += gamma * (Teta * D + Dinv * G);
  }

  BlochOperator op;
  op.mu = mu;
  op.epsilon = wave.amplitude;
  op.speed = c;
  op.params = prm;
  op.N = N;
  op.order = o.order;
  op.cutoff = o.cutoff;
  op.matrix.N = N;
  op.matrix.mu = mu;
  op.matrix.components = 2;
  const int n = 2 * N + 1;
  op.matrix.entries.resize(2 * n, 2 * n);
  op.matrix.entries.block(0, 0, n, n) = trim(L11, Ke, N);
  op.matrix.entries.block(0, n, n, n) = trim(L12, Ke, N);
  op.matrix.entries.block(n, 0, n, n) = trim(L21, Ke, N);
  op.matrix.entries.block(n, n, n, n) = trim(L22, Ke, N);
  return op;
}

ComplexMatrixOp tangent_operator(const StokesWave& wave, double mu, const BlochOptions& o) {
  check_wave(wave);
  using detail::Dual;
  const int N = o.N;
  const int Ke = N + o.pad;
  const int grid = detail::grid_size(Ke);
  const int n = 2 * N + 1;
  ComplexMatrixOp out;
  out.N = N;
  out.mu = mu;
  out.components = 2;
  out.entries = Mat::Zero(2 * n, 2 * n);
  parallel_for(2 * n, [&](int col) {
    const int comp = col / n;
    const int l = col % n - N;
    Series<Dual> eta(Ke, mu), psi(Ke, mu);
    for (int k = -Ke; k <= Ke; ++k) {
      eta.at(k) = Dual(wave.eta.coeff(k));
      psi.at(k) = Dual(wave.psi.coeff(k));
    }
    (comp == 0 ? eta : psi).at(l).d = 1.0;
    auto rhs = detail::ww_rhs(eta, psi, wave.params, wave.order, grid);
    auto r1 = detail::add(detail::scale(detail::apply_symbol(eta, detail::dx_symbol), wave.speed),
                          rhs.d_eta);
    auto r2 = detail::add(detail::scale(detail::apply_symbol(psi, detail::dx_symbol), wave.speed),
                          rhs.d_psi);
    for (int k = -N; k <= N; ++k) {
      out.entries(k + N, col) = r1.at(k).d;
      out.entries(n + k + N, col) = r2.at(k).d;
    }
  });
  return out;
}

bool is_unstable(cplx lambda, double cutoff) {
  return lambda.real() > cutoff * (1.0 + std::abs(lambda));
}

SpectrumSlice make_slice(double mu, std::vector<cplx> values, double cutoff) {
  std::sort(values.begin(), values.end(), [](const cplx& a, const cplx& b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  SpectrumSlice s;
  s.mu = mu;
  s.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& z : values) {
    s.max_real_part = std::max(s.max_real_part, z.real());
    if (is_unstable(z, cutoff)) ++s.unstable_count;
  }
  s.eigenvalues = std::move(values);
  return s;
}

namespace {

// blocks L11, L22 imaginary and L12, L21 real for a reversible wave, so
// diag(I,-iI) (iL) diag(I,iI) is real and dgeev applies
bool real_form(const Mat& L, int n, Eigen::MatrixXd& A) {
  const int m = 2 * n;
  A.resize(m, m);
  double bad = 0.0;
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) {
      cplx z = cplx(0.0, 1.0) * L(r, c);
      if (r >= n) z *= cplx(0.0, -1.0);
      if (c >= n) z *= cplx(0.0, 1.0);
      A(r, c) = z.real();
      bad = std::max(bad, std::abs(z.imag()));
    }
  }
  return bad <= 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
}

std::vector<cplx> dense_eigenvalues(const Mat& L, int n, const BlochOperator& op) {
  auto fail = [&] {
    throw NumericalFailure("dense eigensolver did not converge",
                           {{"mu", op.mu}, {"epsilon", op.epsilon}, {"N", static_cast<double>(op.N)}});
  };
  Eigen::MatrixXd A;
  const int m = static_cast<int>(L.rows());
  if (real_form(L, n, A)) {
    std::vector<double> wr(m), wi(m);
    lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', m, A.data(), m, wr.data(), wi.data(),
                                    nullptr, 1, nullptr, 1);
    if (info != 0) fail();
    std::vector<cplx> v(m);
    for (int i = 0; i < m; ++i) v[i] = cplx(wi[i], -wr[i]);  // lambda = -i a
    return v;
  }
  Eigen::ComplexEigenSolver<Mat> es(L, false);
  if (es.info() != Eigen::Success) fail();
  return std::vector<cplx>(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
}

}  // namespace

SpectrumSlice eigenvalues(const BlochOperator& op) {
  auto v = dense_eigenvalues(op.matrix.entries, 2 * op.N + 1, op);
  return make_slice(op.mu, std::move(v), op.cutoff);
}

double pairing_defect(const std::vector<cplx>& values) {
  double scale = 1.0;
  for (const auto& z : values) scale = std::max(scale, std::abs(z));
  double worst = 0.0;
  for (const auto& a : values) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : values) best = std::min(best, std::abs(a + std::conj(b)));
    worst = std::max(worst, best);
  }
  return worst / scale;
}

SymmetryReport check_symmetries(const BlochOperator& op) {
  const Mat& L = op.matrix.entries;
  const double nrm = std::max(L.norm(), 1e-300);
  SymmetryReport r;
  const Mat KL = structure_inverse(op.N, op.mu, op.params.vorticity) * L;
  r.hamiltonian_defect = (KL - KL.adjoint()).norm() / nrm;
  const Mat S = reversal_sign(op.N);
  r.reversibility_defect = (L * S + S * L.conjugate()).norm() / nrm;
  r.pairing_defect = pairing_defect(eigenvalues(op).eigenvalues);
  return r;
}

std::vector<cplx> flat_spectrum(const PhysicalParams& params, double mu, int N) {
  std::vector<cplx> v;
  v.reserve(2 * (2 * N + 1));
  for (int j = -N; j <= N; ++j) {
    for (int s : {1, -1}) v.emplace_back(0.0, omega_sigma(j + mu, s, params));
  }
  return make_slice(mu, std::move(v), 1e-8).eigenvalues;
}

}  // namespace stokes_spectra
