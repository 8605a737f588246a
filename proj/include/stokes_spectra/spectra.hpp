#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "stokes_spectra/bloch.hpp"
#include "stokes_spectra/dispersion.hpp"

namespace stokes_spectra {

// ---------------------------------------------------------------- bands

struct TraceOptions {
  BlochOptions bloch;
  int max_refine = 6;       // bisection depth for refinement between grid points
  double ambiguity = 1e-3;  // relative margin between best and second-best match
  int jobs = 0;             // 0: default_jobs()
};

struct BandAtlas {
  std::vector<double> mu_grid;         // sorted, refinement points included
  std::vector<SpectrumSlice> slices;   // one per grid point
  /// bands[b][i]: eigenvalue of band b at mu_grid[i]
  std::vector<std::vector<cplx>> bands;
  int refinements = 0;
  /// max over bands and neighbours of |delta lambda| / delta mu
  double max_speed = 0.0;
};

/// Spectra on the grid, matched between neighbours by optimal bipartite
/// assignment. Midpoints are inserted where the match is ambiguous or the
/// unstable count changes, up to max_refine levels.
BandAtlas trace_bands(const StokesWave& wave, std::vector<double> mu_grid,
                      const TraceOptions& options = {});

// ------------------------------------------------------------- figure 8

struct Figure8Options {
  BlochOptions bloch;
  double mu_max = 0.0;     // 0: 4 |epsilon|
  int grid = 200;          // uniform points on (0, mu_max]
  int geometric = 12;      // extra points mu_max 2^-k, k = 1..geometric
  double mu_tol = 1e-6;    // bisection for mu_bar
  double apex_tol = 1e-8;  // golden section in mu
  bool locate = true;      // false: existence and grid maxima only
  int jobs = 0;
};

struct NearZero {
  double mu = 0.0;
  std::vector<cplx> values;  // four eigenvalues of smallest modulus
  double max_real = 0.0;
  bool unstable = false;
};

struct Figure8Report {
  double epsilon = 0.0;
  bool exists = false;
  std::string reason;
  double apex_real = 0.0;
  cplx apex_lambda{0.0, 0.0};
  double apex_mu = 0.0;
  double mu_bar = 0.0;
  int unstable_regions = 0;
  int slices = 0;
  std::vector<NearZero> samples;  // grid points, sorted by mu
};

/// The four eigenvalues nearest the origin at one mu.
NearZero near_zero(const StokesWave& wave, double mu, const BlochOptions& options);

/// Unstable pair emanating from the quadruple zero. Pure gravity only.
Figure8Report extract_figure8(const StokesWave& wave, const Figure8Options& options = {});

// ------------------------------------------------------------ WB scan

struct WbOptions {
  WbOptions() {
    figure8.grid = 40;
    figure8.bloch.N = 48;
  }
  PhysicalParams params;  // depth is overwritten per sample
  Figure8Options figure8;
  StokesOptions stokes;
  double h_tol = 1e-3;
};

struct WbSample {
  double h = 0.0;
  bool exists = false;
  double apex_real_over_eps2 = 0.0;
};

struct WbReport {
  double epsilon = 0.0;
  bool bracketed = false;
  double threshold_h = 0.0;
  std::string reason;
  std::vector<WbSample> grid;       // the h grid as given
  std::vector<WbSample> bisection;  // evaluation order
};

/// Figure-8 existence on each grid depth, then bisection on the first
/// stable -> unstable bracket.
WbReport scan_wb_threshold(const std::vector<double>& h_grid, double epsilon,
                           const WbOptions& options = {});

// -------------------------------------------------------------- isolas

struct IsolaOptions {
  BlochOptions bloch;
  double halfwidth = 0.0;    // initial mu half-window; 0: 10 eps^p
  double band = 0.25;        // |Im lambda - omega*| for eigenvalues of the pair
  int samples = 41;          // points across the unstable window for the fit
  double edge_tol = 1e-3;    // window edges, relative to the distance from the seed
  int widen = 4;             // window enlargements if the gap minimum hits an edge
  int jobs = 0;
  // collision to use; by default the lowest omega* with this p
  double mu_collision = -1.0;
  double omega_star = -1.0;
};

struct IsolaPoint {
  double mu = 0.0;
  cplx lambda{0.0, 0.0};  // member of the pair with Re >= 0
};

struct Isola {
  int p = 0;
  double epsilon = 0.0;
  bool found = false;
  std::string reason;
  double mu_flat = 0.0;      // collision of the flat branches
  double omega_star = 0.0;
  double center_imag = 0.0;  // y0
  double semiaxis_real = 0.0;
  double semiaxis_imag = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double max_real = 0.0;
  double ellipse_residual = 0.0;  // rms of the x^2 fit over R^2
  int slices = 0;
  std::vector<IsolaPoint> points;
};

/// Locates the unstable window by minimising the imaginary gap of the two
/// colliding eigenvalues, brackets its edges, and fits
/// x^2 + E^2 (y - y0)^2 = R^2 by linear least squares.
Isola extract_isola(const StokesWave& wave, int p, const IsolaOptions& options = {});

struct EllipseFit {
  double center = 0.0;
  double semiaxis_real = 0.0;
  double semiaxis_imag = 0.0;
  double residual = 0.0;
  bool ok = false;
};

/// x^2 = a + b y + c y^2 fitted to (x, y) samples.
EllipseFit fit_ellipse(const std::vector<cplx>& points);

// ---------------------------------------------------------------- Kato

struct KatoOptions {
  BlochOptions bloch;
  int nodes = 64;
  int max_nodes = 1024;
  double stability = 1e-9;  // max entry change under node doubling
  double radius = 0.0;      // 0: half the distance to the fifth eigenvalue
  bool auto_center = true;
  cplx center{0.0, 0.0};
  int jobs = 0;
};

struct ReducedMatrix4 {
  double mu = 0.0;
  double epsilon = 0.0;
  Eigen::Matrix4cd entries;  // J4 [[E, F], [F*, G]]
  Eigen::Matrix2cd E, F, G;
  Eigen::Vector4cd eigenvalues;
  Eigen::Vector4cd full_nearest;  // the enclosed eigenvalues of the full slice
  Eigen::MatrixXcd basis;         // 2(2N+1) x 4
  cplx center{0.0, 0.0};
  double radius = 0.0;
  int nodes = 0;
  int rank = 0;
  double trace = 0.0;
  // projector
  double idempotency = 0.0;       // ||P^2 - P|| / ||P||
  double commutation = 0.0;       // ||PL - LP|| / ||L||
  double skew_hamiltonian = 0.0;  // ||(J^-1 P)^* + J^-1 P|| / ||P||
  double reversibility = 0.0;     // ||rho P - P rho|| / ||P||
  // basis and reduced matrix
  double symplectic_defect = 0.0;     // ||F^* J^-1 F - J4^-1||
  double basis_reversal_defect = 0.0; // rho f = +-f
  double hermitian_defect = 0.0;      // ||B4 - B4^*|| / ||B4||
  double invariance_defect = 0.0;     // ||L F - F M|| / ||L||
  double quadrature_change = 0.0;     // last doubling, max entry
};

/// Riesz projector on the four eigenvalues nearest zero by trapezoid
/// quadrature of the resolvent, and the operator compressed to a
/// symplectic, reversible basis of its range.
ReducedMatrix4 kato_reduce(const StokesWave& wave, double mu, const KatoOptions& options = {});

/// J4 = diag(J2, J2), J2 = [[0, 1], [-1, 0]].
Eigen::Matrix4cd j4();

}  // namespace stokes_spectra
