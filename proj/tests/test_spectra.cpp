#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "assignment.hpp"
#include "doctest.h"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/spectra.hpp"

using namespace stokes_spectra;

namespace {

StokesWave wave_at(double eps, double h = -1.0) {
  PhysicalParams p;
  if (h > 0) p.depth = Depth::finite(h);
  return solve_stokes(eps, p);
}

double brute_force_cost(const Eigen::MatrixXd& c) {
  std::vector<int> perm(c.rows());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (size_t i = 0; i < perm.size(); ++i) s += c(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("assignment matches brute force") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 7; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXd c(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = u(rng);
      auto col = detail::min_cost_assignment(c);
      std::vector<int> sorted = col;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < n; ++i) REQUIRE(sorted[i] == i);
      double s = 0;
      for (int i = 0; i < n; ++i) s += c(i, col[i]);
      CHECK(s == doctest::Approx(brute_force_cost(c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("ellipse fit recovers a synthetic ellipse") {
  const double R = 3e-5, E = 0.6, y0 = 0.7;
  std::vector<cplx> pts;
  for (int i = 0; i < 30; ++i) {
    double t = M_PI * (i + 0.5) / 30.0;
    double y = y0 + R / E * std::cos(t);
    pts.emplace_back(R * std::sin(t), y);
  }
  auto f = fit_ellipse(pts);
  REQUIRE(f.ok);
  CHECK(f.center == doctest::Approx(y0).epsilon(1e-12));
  CHECK(f.semiaxis_real == doctest::Approx(R).epsilon(1e-8));
  CHECK(f.semiaxis_imag == doctest::Approx(R / E).epsilon(1e-8));
  CHECK(f.residual <= 1e-8);
  // a line is not an ellipse
  std::vector<cplx> line = {{1, 0}, {1, 1}, {1, 2}, {1, 3}};
  CHECK_FALSE(fit_ellipse(line).ok);
}

TEST_CASE("flat atlas sits on the imaginary axis") {
  TraceOptions o;
  o.bloch.N = 12;
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(-0.45 + 0.1 * i + 0.01);
  auto a = trace_bands(wave_at(0.0, 2.0), grid, o);
  REQUIRE(a.slices.size() == a.mu_grid.size());
  REQUIRE(a.bands.size() == 2u * (2 * 12 + 1));
  for (const auto& b : a.bands) {
    REQUIRE(b.size() == a.mu_grid.size());
    for (const auto& z : b) CHECK(std::abs(z.real()) <= 1e-12);
  }
  CHECK(std::is_sorted(a.mu_grid.begin(), a.mu_grid.end()));
}

TEST_CASE("atlas is conjugate under mu -> -mu and bands are continuous") {
  TraceOptions o;
  o.bloch.N = 16;
  auto w = wave_at(0.04);
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i) grid.push_back(0.01 * i + 0.005);
  auto a = trace_bands(w, grid, o);
  // mirror points
  for (size_t i = 0; i < a.mu_grid.size(); ++i) {
    for (size_t k = 0; k < a.mu_grid.size(); ++k) {
      if (std::abs(a.mu_grid[i] + a.mu_grid[k]) > 1e-14) continue;
      const auto& s = a.slices[i].eigenvalues;
      const auto& t = a.slices[k].eigenvalues;
      for (const auto& z : s) {
        double best = 1e300;
        for (const auto& q : t) best = std::min(best, std::abs(q - std::conj(z)));
        CHECK(best <= 1e-9);
      }
    }
  }
  // flat branches phi -+ sqrt|phi|: over [a, b] the chord slope of sqrt|phi| is at most
  // 1 / sqrt(max(|a|, |b|)), refinement may insert mu = 0 itself
  double worst = 0.0;
  for (const auto& b : a.bands) {
    for (size_t i = 0; i + 1 < a.mu_grid.size(); ++i) {
      double lo = a.mu_grid[i], hi = a.mu_grid[i + 1];
      double v = std::abs(b[i + 1] - b[i]) / (hi - lo);
      double bound = 1.0 + 1.0 / std::sqrt(std::max(std::abs(lo), std::abs(hi)));
      worst = std::max(worst, v / bound);
    }
  }
  CHECK(worst <= 2.0);
  CHECK(a.max_speed > 0.0);
  int unstable_regions = 0;
  bool in = false;
  for (const auto& s : a.slices) {
    bool u = s.unstable_count > 0;
    if (u && !in) ++unstable_regions;
    in = u;
  }
  // (0, mu_bar) and its mirror
  CHECK(unstable_regions == 2);
}

TEST_CASE("trace_bands rejects bad grids") {
  auto w = wave_at(0.0);
  CHECK_THROWS_AS(trace_bands(w, {}), InvalidArgument);
  CHECK_THROWS_AS(trace_bands(w, {0.6}), InvalidArgument);
}

TEST_CASE("figure 8 on a small truncation") {
  Figure8Options o;
  o.bloch.N = 24;
  o.grid = 40;
  o.mu_tol = 1e-5;
  o.apex_tol = 1e-6;
  SUBCASE("flat state") {
    auto r = extract_figure8(wave_at(0.0), o);
    CHECK_FALSE(r.exists);
    CHECK(r.reason == "flat state");
  }
  SUBCASE("deep water") {
    const double eps = 0.04;
    auto r = extract_figure8(wave_at(eps), o);
    REQUIRE(r.exists);
    CHECK(r.unstable_regions == 1);
    CHECK(r.apex_real / (eps * eps) == doctest::Approx(0.5).epsilon(0.15));
    CHECK(r.mu_bar / (2 * std::sqrt(2.0) * eps) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(r.mu_bar > 0.0);
    CHECK(r.mu_bar < 0.5);
    CHECK(r.apex_real > 1e-8);
    CHECK(r.apex_lambda.real() == r.apex_real);
    CHECK(r.apex_mu < r.mu_bar);
  }
  SUBCASE("shallow water is modulationally stable") {
    auto r = extract_figure8(wave_at(0.02, 1.0), o);
    CHECK_FALSE(r.exists);
  }
  SUBCASE("capillary waves are rejected") {
    PhysicalParams p;
    p.surface_tension = 0.07;  // 1/kappa not an integer, no Wilton resonance
    CHECK_THROWS_AS(extract_figure8(solve_stokes(0.02, p), o), InvalidArgument);
  }
}

TEST_CASE("growth factor increases with depth") {
  Figure8Options o;
  o.bloch.N = 24;
  o.grid = 30;
  o.locate = false;
  const double eps = 0.02;
  auto a = extract_figure8(wave_at(eps, 1.5), o);
  auto b = extract_figure8(wave_at(eps, 3.0), o);
  REQUIRE(a.exists);
  REQUIRE(b.exists);
  CHECK(b.apex_real > a.apex_real);
}

TEST_CASE("WB scan without a bracket") {
  WbOptions o;
  o.figure8.bloch.N = 16;
  o.figure8.grid = 10;
  auto r = scan_wb_threshold({0.8, 1.0}, 0.02, o);
  CHECK_FALSE(r.bracketed);
  CHECK_FALSE(r.reason.empty());
  REQUIRE(r.grid.size() == 2);
  CHECK_FALSE(r.grid[0].exists);
  CHECK_THROWS_AS(scan_wb_threshold({1.5, 1.2}, 0.01, o), InvalidArgument);
  CHECK_THROWS_AS(scan_wb_threshold({1.2, 1.5}, 0.0, o), InvalidArgument);
}

TEST_CASE("isola at finite depth") {
  IsolaOptions o;
  o.bloch.N = 24;
  o.samples = 21;
  auto w = wave_at(0.04, 1.5);
  auto r = extract_isola(w, 2, o);
  REQUIRE(r.found);
  CHECK(r.semiaxis_real > 0.0);
  CHECK(r.semiaxis_imag > 0.0);
  CHECK(r.mu_lo < r.mu_hi);
  CHECK(r.ellipse_residual <= 0.05);
  CHECK(std::abs(r.center_imag - r.omega_star) <= 3.0 * 0.04 * 0.04);
  CHECK(r.max_real == doctest::Approx(r.semiaxis_real).epsilon(0.05));
  for (const auto& pt : r.points) CHECK(std::abs(pt.lambda.imag() - r.omega_star) < 0.01);
  auto flat = extract_isola(wave_at(0.0, 1.5), 2, o);
  CHECK_FALSE(flat.found);
  CHECK(flat.reason == "flat state");
  CHECK_THROWS_AS(extract_isola(w, 1, o), InvalidArgument);
}

TEST_CASE("Kato reduction") {
  KatoOptions o;
  o.bloch.N = 24;
  SUBCASE("inside the figure 8") {
    auto r = kato_reduce(wave_at(0.03), 0.02, o);
    CHECK(r.rank == 4);
    CHECK(r.trace == doctest::Approx(4.0).epsilon(1e-10));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(r.eigenvalues[i] - r.full_nearest[i]) <= 1e-8);
    CHECK(r.idempotency <= 1e-9);
    CHECK(r.commutation <= 1e-8);
    CHECK(r.skew_hamiltonian <= 1e-8);
    CHECK(r.reversibility <= 1e-8);
    CHECK(r.symplectic_defect <= 1e-8);
    CHECK(r.basis_reversal_defect <= 1e-8);
    CHECK((r.E - r.E.adjoint()).norm() <= 1e-8);
    CHECK((r.G - r.G.adjoint()).norm() <= 1e-8);
    CHECK(r.invariance_defect <= 1e-8);
    // the growing pair
    double re = 0;
    for (int i = 0; i < 4; ++i) re = std::max(re, r.eigenvalues[i].real());
    CHECK(re > 1e-5);
    // Hamiltonian form of the 4x4
    Eigen::Matrix4cd B = j4().inverse() * r.entries;
    CHECK((B - B.adjoint()).norm() <= 1e-8 * B.norm());
  }
  SUBCASE("flat state at mu = 0") {
    auto r = kato_reduce(wave_at(0.0), 0.0, o);
    CHECK(r.rank == 4);
    Eigen::Matrix4cd M2 = r.entries * r.entries;
    CHECK(M2.norm() <= 1e-12 * std::max(1.0, r.entries.norm()));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(r.eigenvalues[i]) <= 1e-7);
  }
  SUBCASE("contour misconfiguration") {
    KatoOptions bad = o;
    bad.radius = 5.0;
    CHECK_THROWS_AS(kato_reduce(wave_at(0.03), 0.02, bad), NumericalFailure);
  }
}
