#pragma once

#include <string>
#include <vector>

#include "stokes_spectra/field.hpp"
#include "stokes_spectra/params.hpp"

namespace stokes_spectra {

struct StokesOptions {
  int N = 32;          // Fourier truncation of the wave
  int order = 8;       // DN expansion order
  double tol = 1e-11;  // sup-norm residual target
  int max_iter = 50;
  double singular_rcond = 1e-12;
};

/// Traveling wave eta(x - ct), psi(x - ct); eta even with cos-coefficient
/// of mode 1 equal to the amplitude, psi odd, both zero-mean.
struct StokesWave {
  double amplitude = 0.0;
  PeriodicFunction eta;
  PeriodicFunction psi;
  double speed = 0.0;
  PhysicalParams params;
  int N = 0;
  int order = 8;
  double residual_norm = 0.0;
  /// Residual of the linear ansatz the iteration started from.
  double initial_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
};

/// Newton solve of c u' + N(u) = 0 with the speed as unknown and the
/// amplitude fixed by the first cosine mode. Non-convergence returns the
/// best iterate with converged = false. A singular Jacobian (Wilton
/// resonance) throws NumericalFailure naming kappa and the resonant mode.
/// A warm start, when given, seeds the iteration instead of the linear wave.
StokesWave solve_stokes(double epsilon, const PhysicalParams& params,
                        const StokesOptions& options = {}, const StokesWave* warm_start = nullptr);

/// Sequential continuation; each solve starts from the previous wave,
/// rescaled mode by mode. Throws NumericalFailure with the failing epsilon.
std::vector<StokesWave> continue_in_amplitude(const std::vector<double>& eps_grid,
                                              const PhysicalParams& params,
                                              const StokesOptions& options = {});

struct SurfaceVelocity {
  PeriodicFunction V;  // horizontal velocity at the surface
  PeriodicFunction B;  // vertical velocity at the surface
};

/// B = (G psi + eta_x psi_x)/(1 + eta_x^2), V = psi_x - B eta_x, on
/// `modes` Fourier modes (0: the wave truncation).
SurfaceVelocity velocity_trace(const StokesWave& wave, int modes = 0);

struct TravelingResidual {
  PeriodicFunction r_eta;
  PeriodicFunction r_psi;  // mean removed
  double norm = 0.0;       // sup|r_eta| + sup|r_psi|
};

/// c u' + N(u) for arbitrary (eta, psi, c).
TravelingResidual traveling_residual(const PeriodicFunction& eta, const PeriodicFunction& psi,
                                     double speed, const PhysicalParams& params, int order);

/// Index k in 2..N minimising |Omega(k) - k Omega(1)|, with that value.
std::pair<int, double> nearest_linear_resonance(const PhysicalParams& params, int N);

}  // namespace stokes_spectra
