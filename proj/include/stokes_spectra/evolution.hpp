#pragma once

#include <utility>
#include <vector>

#include "stokes_spectra/field.hpp"
#include "stokes_spectra/params.hpp"
#include "stokes_spectra/stokes.hpp"

namespace stokes_spectra {

/// Surface elevation and velocity potential trace at time t. Both zero-mean:
/// psi is the representative of its class modulo constants.
struct WWState {
  PeriodicFunction eta;
  PeriodicFunction psi;
  double time = 0.0;
};

struct EvolutionOptions {
  int N = 64;              // Fourier truncation of the integrated system
  int order = 8;           // DN expansion order
  double sobolev_s = 4.0;  // norms H^{s+1/4} x H^{s-1/4}
  int record_every = 1;    // samples every k steps (the last step is always kept)
  double blowup_factor = 10.0;
};

/// (eta_t, psi_t) of the full system, products on a 2x padded grid, the
/// Bernoulli constant dropped from psi_t.
std::pair<PeriodicFunction, PeriodicFunction> rhs(const WWState& state, const PhysicalParams& params,
                                                  int order = 8);

/// Energy: kinetic + potential + capillary + vorticity terms, integrated
/// over [0, 2 pi] on the padded grid. The flat state has H = 2 pi kappa.
double hamiltonian(const WWState& state, const PhysicalParams& params, int order = 8);

/// 0.25 * 2 pi / Omega(N).
double default_dt(int N, const PhysicalParams& params);

/// (eta(-x), -psi(-x)).
WWState reversed(const WWState& state);

/// The wave profiles resized to N modes, t = 0.
WWState stokes_state(const StokesWave& wave, int N);

struct EvolutionSample {
  double t = 0.0;
  double norm_eta = 0.0;  // ||eta||_{H^{s+1/4}}
  double norm_psi = 0.0;  // ||psi||_{H^{s-1/4}}, homogeneous
  double hamiltonian = 0.0;
  double mean_eta = 0.0;  // before the zero-mean projection
};

struct EvolutionRun {
  std::vector<EvolutionSample> samples;
  WWState final_state;
  double dt = 0.0;  // signed step actually used
  int steps = 0;
  bool blew_up = false;
  double failure_time = 0.0;
  double hamiltonian_drift = 0.0;  // max |H(t) - H(0)| / |H(0)|
  double mean_drift = 0.0;         // max |<eta>(t) - <eta>(0)|
  double max_norm = 0.0;           // max norm_eta + norm_psi
};

/// Integrates over a duration T (negative: backwards) with an explicit
/// fourth-order Runge-Kutta scheme in the variables of the exact linear
/// flow. |dt| is shrunk so that the steps land on T; dt = 0 picks
/// default_dt. Stops early when the norm exceeds blowup_factor times its
/// initial value. DN divergence throws NumericalFailure with the time.
EvolutionRun run(const WWState& initial, double dt, double T, const PhysicalParams& params,
                 const EvolutionOptions& options = {});

}  // namespace stokes_spectra
