#include <cmath>

#include "doctest.h"
#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"

using namespace stokes_spectra;

TEST_CASE("flat DN symbol") {
  CHECK(symbol_g0(1.0, Depth::infinite()) == 1.0);
  CHECK(symbol_g0(0.0, Depth::finite(0.7)) == 0.0);
  CHECK(symbol_g0(2.0, Depth::finite(1.0)) == doctest::Approx(2.0 * std::tanh(2.0)).epsilon(1e-15));
  CHECK(symbol_g0(-3.0, Depth::finite(2.0)) == symbol_g0(3.0, Depth::finite(2.0)));
  CHECK(symbol_g0(1e3, Depth::finite(1.0)) == 1e3);
  CHECK(stable_tanh(41.0) == 1.0);
  CHECK(stable_tanh(-41.0) == -1.0);
}

TEST_CASE("depth tag") {
  CHECK(Depth::infinite().is_infinite());
  CHECK(std::isinf(Depth::infinite().value()));
  CHECK(Depth::parse("inf") == Depth::infinite());
  CHECK(Depth::parse("1.5").value() == 1.5);
  CHECK(Depth::parse(Depth::finite(1.363).to_string()) == Depth::finite(1.363));
  CHECK_THROWS_AS(Depth::finite(-1.0), InvalidArgument);
  CHECK_THROWS_AS(Depth::parse("abc"), InvalidArgument);
}

TEST_CASE("normal mode frequencies") {
  PhysicalParams p;
  CHECK(omega_j(1, p) == doctest::Approx(1.0).epsilon(1e-15));
  p.vorticity = 2.0;
  CHECK(omega_j(1, p) == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-15));
  p.vorticity = 0.0;
  p.surface_tension = 0.3;
  p.depth = Depth::finite(1.2);
  for (int j = 1; j < 40; ++j) CHECK(omega_j(-j, p) == omega_j(j, p));
  CHECK_THROWS_AS(omega_j(0, p), InvalidArgument);
  PhysicalParams bad;
  bad.gravity = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("frequency growth exponents") {
  auto slope = [](const PhysicalParams& p) {
    return std::log(omega_j(1024, p) / omega_j(64, p)) / std::log(1024.0 / 64.0);
  };
  PhysicalParams p;
  CHECK(std::abs(slope(p) - 0.5) < 0.05);
  p.surface_tension = 0.2;
  p.depth = Depth::finite(2.0);
  CHECK(std::abs(slope(p) - 1.5) < 0.05);
}

TEST_CASE("Floquet branches") {
  CHECK(omega_sigma(0.0, 1, Depth::infinite()) == 0.0);
  CHECK(omega_sigma(1.0, 1, Depth::infinite()) == 0.0);
  const double ch = std::sqrt(std::tanh(1.0));
  CHECK(omega_sigma(0.5, -1, Depth::finite(1.0)) ==
        doctest::Approx(ch * 0.5 + std::sqrt(0.5 * std::tanh(0.5))).epsilon(1e-15));
  // The general form reduces to the depth-only one for pure gravity.
  PhysicalParams p;
  p.depth = Depth::finite(1.7);
  for (double phi : {-2.3, -0.4, 0.0, 0.9, 3.1}) {
    for (int s : {1, -1}) {
      CHECK(omega_sigma(phi, s, p) == doctest::Approx(omega_sigma(phi, s, p.depth)).epsilon(1e-14));
    }
  }
  // Shifting mu by one relabels j.
  for (int j = -5; j <= 5; ++j) {
    CHECK(omega_sigma(j + 0.3 + 1.0, 1, p.depth) ==
          doctest::Approx(omega_sigma((j + 1) + 0.3, 1, p.depth)).epsilon(1e-15));
  }
}

TEST_CASE("deep-water collisions") {
  PhysicalParams p;
  auto res = find_collisions(4, p);
  CHECK(res.missing.empty());
  // For p = 2 the branches cross at mu = 1/4, omega* = 3/4.
  bool found = false;
  for (const auto& c : res.points) {
    CHECK(c.mu >= 0.0);
    CHECK(c.mu < 1.0);
    CHECK(c.defect <= 1e-12);
    CHECK(c.omega_star > 0.0);
    if (c.p == 2 && std::abs(c.mu - 0.25) < 1e-9 && std::abs(c.omega_star - 0.75) < 1e-9) found = true;
  }
  CHECK(found);
  for (size_t i = 1; i < res.points.size(); ++i) {
    CHECK(res.points[i - 1].omega_star <= res.points[i].omega_star);
  }
  // Quadruple zero: (0,+), (0,-), (1,+), (-1,-).
  CHECK(res.zero_branches.size() == 4);
}

TEST_CASE("finite-depth collisions are ordered in p") {
  PhysicalParams p;
  p.depth = Depth::finite(1.5);
  CollisionOptions o;
  o.j_max = 16;
  auto res = find_collisions(3, p, o);
  double w2 = 1e300, w3 = 1e300;
  for (const auto& c : res.points) {
    const double lhs = omega_sigma(c.first.j + c.mu, c.first.sigma, p);
    const double rhs = omega_sigma(c.second.j + c.mu, c.second.sigma, p);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
    CHECK(c.first.j - c.second.j == c.p);
    if (c.p == 2) w2 = std::min(w2, c.omega_star);
    if (c.p == 3) w3 = std::min(w3, c.omega_star);
  }
  CHECK(w2 > 0.0);
  CHECK(w2 < w3);
}

TEST_CASE("collision window too small") {
  PhysicalParams p;
  CollisionOptions o;
  o.j_max = 2;
  CHECK_THROWS_AS(find_collisions(3, p, o), InvalidArgument);
  CHECK_THROWS_AS(find_collisions(1, p), InvalidArgument);
}
