#include <cmath>

#include "doctest.h"
#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/evolution.hpp"

using namespace stokes_spectra;

namespace {

double state_diff(const WWState& a, const WWState& b) {
  return std::max(max_coeff_diff(a.eta, b.eta), max_coeff_diff(a.psi, b.psi));
}

WWState generic(int N, double eps) {
  return {PeriodicFunction::cosine(N, eps) + PeriodicFunction::sine(N, 0.3 * eps, 2),
          PeriodicFunction::sine(N, 0.4 * eps, 1), 0.0};
}

}  // namespace

TEST_CASE("flat state is an equilibrium") {
  PhysicalParams p;
  p.surface_tension = 0.2;
  WWState s{PeriodicFunction(16), PeriodicFunction(16), 0.0};
  auto [de, dp] = rhs(s, p);
  CHECK(de.sup_norm() == 0.0);
  CHECK(dp.sup_norm() == 0.0);
  CHECK(hamiltonian(s, p) == doctest::Approx(2 * M_PI * 0.2).epsilon(1e-14));
  p.surface_tension = 1.0;
  CHECK(hamiltonian(s, p) == doctest::Approx(2 * M_PI).epsilon(1e-14));
  p.surface_tension = 0.0;
  CHECK(hamiltonian(s, p) == 0.0);
}

TEST_CASE("linearization at rest") {
  // eta_t = G0 psi, psi_t = -(g + kappa k^2) eta for a single mode
  PhysicalParams p;
  p.gravity = 1.3;
  p.surface_tension = 0.2;
  p.depth = Depth::finite(0.9);
  const double d = 1e-6;
  const int k = 2;
  WWState a{PeriodicFunction::cosine(16, d, k), PeriodicFunction(16), 0.0};
  auto [de, dp] = rhs(a, p);
  CHECK(de.sup_norm() <= 10 * d * d);
  CHECK(std::abs(dp.cos_coeff(k) + (p.gravity + p.surface_tension * k * k) * d) <= 10 * d * d);
  WWState b{PeriodicFunction(16), PeriodicFunction::sine(16, d, k), 0.0};
  auto [de2, dp2] = rhs(b, p);
  CHECK(std::abs(de2.sin_coeff(k) - k * std::tanh(0.9 * k) * d) <= 10 * d * d);
  CHECK(dp2.sup_norm() <= 10 * d * d);
}

TEST_CASE("traveling wave identity") {
  // u(x - ct): u_t = -c u_x
  PhysicalParams p;
  p.depth = Depth::finite(1.7);
  StokesOptions so;
  so.N = 24;
  auto w = solve_stokes(0.04, p, so);
  auto s = stokes_state(w, 24);
  auto [de, dp] = rhs(s, p, w.order);
  auto r1 = de + w.speed * s.eta.derivative();
  auto r2 = dp + w.speed * s.psi.derivative();
  CHECK(r1.sup_norm() <= 1e-10);
  CHECK(r2.sup_norm() <= 1e-10);
}

TEST_CASE("hamiltonian closed forms and reversal") {
  PhysicalParams p;
  p.gravity = 2.0;
  const double a = 0.03;
  WWState pot{PeriodicFunction::cosine(8, a), PeriodicFunction(8), 0.0};
  CHECK(hamiltonian(pot, p) == doctest::Approx(0.5 * M_PI * p.gravity * a * a).epsilon(1e-13));
  // G(0) sin(3x) = 3 sin(3x) in deep water
  WWState kin{PeriodicFunction(8), PeriodicFunction::sine(8, a, 3), 0.0};
  CHECK(hamiltonian(kin, p) == doctest::Approx(0.5 * M_PI * 3 * a * a).epsilon(1e-13));

  p.surface_tension = 0.4;
  p.vorticity = 0.6;
  p.depth = Depth::finite(1.2);
  auto s = generic(16, 0.05);
  double h0 = hamiltonian(s, p);
  CHECK(std::abs(hamiltonian(reversed(s), p) - h0) <= 1e-12 * std::abs(h0));
  CHECK(state_diff(reversed(reversed(s)), s) == 0.0);
}

TEST_CASE("default time step") {
  PhysicalParams p;
  CHECK(default_dt(64, p) == doctest::Approx(0.25 * 2 * M_PI / 8.0).epsilon(1e-14));
  CHECK_THROWS_AS(default_dt(0, p), InvalidArgument);
}

TEST_CASE("stokes wave translates by one wavelength per period") {
  PhysicalParams p;
  StokesOptions so;
  so.N = 32;
  auto w = solve_stokes(0.05, p, so);
  auto u0 = stokes_state(w, 32);
  EvolutionOptions o;
  o.N = 32;
  auto r = run(u0, 0.0, 2 * M_PI / w.speed, p, o);
  CHECK_FALSE(r.blew_up);
  CHECK(r.final_state.time == doctest::Approx(2 * M_PI / w.speed).epsilon(1e-14));
  CHECK(state_diff(r.final_state, u0) <= 1e-6);
  CHECK(r.mean_drift <= 1e-13);
  CHECK(r.samples.size() == static_cast<size_t>(r.steps + 1));
}

TEST_CASE("conservation and invariant subspaces") {
  PhysicalParams p;
  p.depth = Depth::finite(2.0);
  p.surface_tension = 0.1;
  EvolutionOptions o;
  o.N = 32;
  SUBCASE("energy and mean") {
    auto r = run(generic(32, 0.05), 0.05, 20.0, p, o);
    CHECK(r.hamiltonian_drift <= 1e-8);
    CHECK(r.mean_drift <= 1e-13);
    for (const auto& smp : r.samples) CHECK(std::abs(smp.mean_eta) <= 1e-13);
  }
  SUBCASE("reversibility") {
    auto u0 = generic(32, 0.05);
    auto fwd = run(reversed(u0), 0.05, 2 * M_PI, p, o);
    auto bwd = run(u0, 0.05, -2 * M_PI, p, o);
    CHECK(bwd.final_state.time == doctest::Approx(-2 * M_PI));
    CHECK(state_diff(fwd.final_state, reversed(bwd.final_state)) <= 1e-8);
  }
  SUBCASE("even-even data stay even") {
    WWState s{PeriodicFunction::cosine(32, 0.05) + PeriodicFunction::cosine(32, 0.01, 3),
              PeriodicFunction::cosine(32, 0.03, 2), 0.0};
    o.record_every = 50;
    auto r = run(s, 0.0, 30.0, p, o);
    CHECK(r.final_state.eta.parity_defect(Parity::even) <= 1e-10);
    CHECK(r.final_state.psi.parity_defect(Parity::even) <= 1e-10);
  }
}

TEST_CASE("fourth order in time") {
  PhysicalParams p;
  EvolutionOptions o;
  o.N = 32;
  auto u0 = generic(32, 0.05);
  const double T = 8.0;
  auto ref = run(u0, 0.01, T, p, o).final_state;
  std::vector<double> err;
  for (double dt : {0.2, 0.1, 0.05}) err.push_back(state_diff(run(u0, dt, T, p, o).final_state, ref));
  for (int i = 0; i + 1 < 3; ++i) {
    double order = std::log2(err[i] / err[i + 1]);
    CHECK(order == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  }
}

TEST_CASE("norms, recording and blow-up detector") {
  PhysicalParams p;
  EvolutionOptions o;
  o.N = 16;
  const double eps = 0.05;
  WWState s{PeriodicFunction::cosine(16, eps), PeriodicFunction(16), 0.0};
  auto r0 = run(s, 0.0, 0.0, p, o);
  REQUIRE(r0.samples.size() == 1);
  // mode 1 has unit weight in both norms
  CHECK(r0.samples[0].norm_eta == doctest::Approx(eps / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r0.samples[0].norm_psi == 0.0);

  o.record_every = 7;
  auto r = run(s, 0.0, 10.0, p, o);
  CHECK(r.samples.size() == static_cast<size_t>(1 + r.steps / 7 + (r.steps % 7 ? 1 : 0)));
  CHECK(r.max_norm <= 3 * eps);

  // energy moves from eta to psi, the norm sum grows by up to sqrt 2
  o.blowup_factor = 1.2;
  auto b = run(s, 0.0, 10.0, p, o);
  CHECK(b.blew_up);
  CHECK(b.failure_time > 0.0);
  CHECK(b.failure_time < 10.0);
  const auto& last = b.samples.back();
  CHECK(last.t == b.failure_time);
  CHECK(last.norm_eta + last.norm_psi > 1.2 * r0.samples[0].norm_eta);
}

TEST_CASE("evolution input errors") {
  PhysicalParams p;
  auto s = generic(16, 0.05);
  EvolutionOptions o;
  o.N = 16;
  o.record_every = 0;
  CHECK_THROWS_AS(run(s, 0.1, 1.0, p, o), InvalidArgument);
  o.record_every = 1;
  o.blowup_factor = 0.5;
  CHECK_THROWS_AS(run(s, 0.1, 1.0, p, o), InvalidArgument);
  o.blowup_factor = 10;
  CHECK_THROWS_AS(run(s, NAN, 1.0, p, o), InvalidArgument);
  // steep short wave: the DN series diverges
  WWState steep{PeriodicFunction::cosine(16, 0.5, 8), PeriodicFunction::sine(16, 0.5, 8), 0.0};
  try {
    run(steep, 0.01, 1.0, p, o);
    FAIL("expected divergence");
  } catch (const NumericalFailure& e) {
    CHECK(e.context().count("time") == 1);
  }
}
