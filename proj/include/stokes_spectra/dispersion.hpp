#pragma once

#include <vector>

#include "stokes_spectra/params.hpp"

namespace stokes_spectra {

/// tanh with saturation beyond |x| > 40, where double tanh is exactly +-1.
double stable_tanh(double x);

/// Flat Dirichlet-Neumann symbol: xi tanh(h xi), or |xi| in deep water.
double symbol_g0(double xi, const Depth& depth);

/// Normal-mode frequency Omega(j) of the linearized system at rest.
/// Throws InvalidArgument for j == 0.
double omega_j(int j, const PhysicalParams& params);

/// Floquet branch omega^sigma(phi) of the flat operator in the frame moving
/// with the linear speed; lambda_j^sigma(mu) = i omega^sigma(j + mu).
/// For g = 1, kappa = gamma = 0 this is c_h phi - sigma sqrt(phi tanh(h phi)).
double omega_sigma(double phi, int sigma, const PhysicalParams& params);

/// Pure-gravity (g = 1) form, depending on the depth only.
double omega_sigma(double phi, int sigma, const Depth& depth);

struct BranchId {
  int j = 0;
  int sigma = 1;
  friend bool operator==(const BranchId&, const BranchId&) = default;
};

struct CollisionPoint {
  int p = 0;                // |j - j'|
  double mu = 0.0;          // in [0, 1)
  double omega_star = 0.0;  // common value omega^sigma(j + mu) = omega^sigma'(j' + mu)
  BranchId first;           // branch with the larger j
  BranchId second;
  double defect = 0.0;      // |omega(first) - omega(second)| at the refined mu
};

struct CollisionSearch {
  /// Collisions with omega_star > 0, sorted by omega_star then mu.
  std::vector<CollisionPoint> points;
  /// Requested p values with no collision inside the j window.
  std::vector<int> missing;
  /// Branches vanishing at mu = 0 (the quadruple zero eigenvalue).
  std::vector<BranchId> zero_branches;
};

struct CollisionOptions {
  int j_max = 64;
  int mu_samples = 10000;
  double tolerance = 1e-12;
};

/// Locates double eigenvalues of the flat Floquet operator: for every
/// p = 2..p_max, all branch pairs (j, sigma), (j', sigma') with j - j' = p
/// whose frequencies cross on mu in [0, 1), refined by bisection.
CollisionSearch find_collisions(int p_max, const PhysicalParams& params,
                                const CollisionOptions& options = {});

/// Branches with omega^sigma(j) == 0 at mu = 0 within |j| <= j_max.
std::vector<BranchId> zero_branches(const PhysicalParams& params, int j_max = 4);

}  // namespace stokes_spectra
