#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stokes_spectra/dno.hpp"
#include "stokes_spectra/stokes.hpp"

namespace stokes_spectra {

struct BlochOptions {
  int N = 64;      // Fourier modes kept, matrix dimension 2(2N+1)
  int pad = 16;    // extra modes used while forming operator products
  int order = 8;   // DN expansion order
  double cutoff = 1e-8;  // instability: Re > cutoff (1 + |lambda|)
};

/// Floquet-shifted linearization c d_x + dN(u) at a traveling wave, on
/// the basis e^{i(k+mu)x}, |k| <= N, blocks ordered (eta, psi).
struct BlochOperator {
  double mu = 0.0;
  double epsilon = 0.0;
  double speed = 0.0;
  PhysicalParams params;
  int N = 0;
  int order = 8;
  double cutoff = 1e-8;
  ComplexMatrixOp matrix;
};

BlochOperator assemble(const StokesWave& wave, double mu, const BlochOptions& options = {});

/// Same operator obtained by forward-mode differentiation of the discrete
/// traveling-wave residual. Used to cross-check the assembly.
ComplexMatrixOp tangent_operator(const StokesWave& wave, double mu, const BlochOptions& options = {});

struct SpectrumSlice {
  double mu = 0.0;
  std::vector<cplx> eigenvalues;  // sorted by (imag, real)
  double max_real_part = 0.0;
  int unstable_count = 0;
};

bool is_unstable(cplx lambda, double cutoff);

/// Dense eigensolve of the full matrix. Throws NumericalFailure on
/// eigensolver breakdown, naming mu, epsilon and N.
SpectrumSlice eigenvalues(const BlochOperator& op);

/// Sorts by (imag, real) and fills the instability summary.
SpectrumSlice make_slice(double mu, std::vector<cplx> values, double cutoff);

struct SymmetryReport {
  double hamiltonian_defect = 0.0;     // ||K L - (K L)^*|| / ||L||, K = J_gamma^{-1}
  double reversibility_defect = 0.0;   // ||L S + S conj(L)|| / ||L||
  double pairing_defect = 0.0;         // lambda -> -conj(lambda), relative
};

SymmetryReport check_symmetries(const BlochOperator& op);
/// Pairing defect of a list: max_i min_j |l_i + conj(l_j)| / max(1, max |l|).
double pairing_defect(const std::vector<cplx>& values);

/// J_gamma^{-1} = [[gamma d^{-1}, -I], [I, 0]] on the Bloch basis.
Eigen::MatrixXcd structure_inverse(int N, double mu, double gamma);
/// J_gamma = [[0, I], [-I, gamma d^{-1}]].
Eigen::MatrixXcd structure(int N, double mu, double gamma);
/// S = diag(I, -I); the involution rho-bar acts as v -> S conj(v).
Eigen::MatrixXcd reversal_sign(int N);

/// i omega^sigma(j + mu) for |j| <= N, sigma = +-1, sorted like a slice.
std::vector<cplx> flat_spectrum(const PhysicalParams& params, double mu, int N);

}  // namespace stokes_spectra
