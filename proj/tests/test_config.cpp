#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "stokes_spectra/config.hpp"
#include "stokes_spectra/error.hpp"

using namespace stokes_spectra;

TEST_CASE("config defaults") {
  RunConfig c;
  CHECK(c.real("gravity") == 1.0);
  CHECK(c.depth().is_infinite());
  CHECK(c.integer("N") == 64);
  CHECK(c.integer("dno_order") == 8);
  CHECK(c.real("newton_tol") == 1e-11);
  CHECK(c.get("evolve_initial") == "stokes");
  CHECK(c.unsigned_integer("seed") == 1);
  auto mu = c.grid("mu_grid");
  REQUIRE(mu.size() == 100);
  CHECK(mu.front() == -0.495);
  CHECK(mu.back() == 0.495);
  CHECK(c.grid("h_grid") == std::vector<double>{1.2, 1.5});
  auto p = c.params();
  CHECK(p.gravity == 1.0);
  CHECK(p.surface_tension == 0.0);
  CHECK(p.vorticity == 0.0);
  CHECK(p.depth.is_infinite());
  for (const auto& k : RunConfig::keys()) CHECK_NOTHROW(c.get(k));
}

TEST_CASE("config parse, comments, canonical values") {
  auto c = RunConfig::parse(
      "# header\n"
      "  gravity = 9.81   # trailing\n"
      "depth=1.5\r\n"
      "\n"
      "eps_grid = 0.01:0.03:3\n"
      "epsilon = 2e-2\n"
      "seed = 18446744073709551615\n"
      "evolve_initial = cosine\n");
  CHECK(c.real("gravity") == 9.81);
  CHECK(c.depth().value() == 1.5);
  CHECK(c.get("epsilon") == "0.02");
  CHECK(c.get("eps_grid") == "0.01,0.02,0.03");
  CHECK(c.unsigned_integer("seed") == 18446744073709551615ull);
  CHECK(c.get("evolve_initial") == "cosine");
  CHECK(RunConfig::parse("depth = inf").depth().is_infinite());
}

TEST_CASE("config serialize round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    RunConfig c;
    c.set("gravity", format_fixed17(0.1 + 10 * u(rng)));
    c.set("surface_tension", format_fixed17(u(rng)));
    c.set("vorticity", format_fixed17(u(rng) - 0.5));
    c.set("depth", u(rng) < 0.3 ? "inf" : format_fixed17(0.5 + u(rng)));
    c.set("epsilon", format_fixed17(0.1 * u(rng)));
    c.set("N", std::to_string(2 + t));
    const double a = u(rng);
    c.set("eps_grid", format_fixed17(a) + "," + format_fixed17(a + 0.25));
    const auto text = c.serialize();
    auto back = RunConfig::parse(text);
    CHECK(back == c);
    CHECK(back.serialize() == text);
    CHECK(back.params().gravity == c.params().gravity);
  }
}

TEST_CASE("config file load") {
  const std::string path = "test_config_tmp.conf";
  {
    std::ofstream f(path);
    f << "surface_tension = 0.07\nj_max = 5\n";
  }
  auto c = RunConfig::load(path);
  CHECK(c.real("surface_tension") == 0.07);
  CHECK(c.integer("j_max") == 5);
  std::remove(path.c_str());
  CHECK_THROWS_AS(RunConfig::load("does/not/exist.conf"), InvalidArgument);
}

TEST_CASE("config errors name the key") {
  auto message = [](const std::string& text) {
    try {
      RunConfig::parse(text);
    } catch (const InvalidArgument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("nonsense = 1").find("nonsense") != std::string::npos);
  CHECK(message("gravity = 0").find("gravity") != std::string::npos);
  CHECK(message("gravity = abc").find("gravity") != std::string::npos);
  CHECK(message("N = 3.5").find("'N'") != std::string::npos);
  CHECK(message("N = 1").find("N") != std::string::npos);
  CHECK(message("surface_tension = -1").find("surface_tension") != std::string::npos);
  CHECK(message("depth = -2").size() > 0);
  CHECK(message("h_grid = 1.5,1.2").find("increasing") != std::string::npos);
  CHECK(message("h_grid = 1.2,,1.5").find("h_grid") != std::string::npos);
  CHECK(message("h_grid = 1:2").find("start:stop:count") != std::string::npos);
  CHECK(message("mu_grid = 0:0.7:3").find("mu_grid") != std::string::npos);
  CHECK(message("evolve_initial = sine").find("stokes") != std::string::npos);
  CHECK(message("blowup_factor = 1").find("blowup_factor") != std::string::npos);
  CHECK(message("gravity").find("line 1") != std::string::npos);
  CHECK(message("gravity = nan").find("gravity") != std::string::npos);
  CHECK(message("seed = -1").find("seed") != std::string::npos);
  RunConfig c;
  CHECK_THROWS_AS(c.real("N"), InvalidArgument);
  CHECK_THROWS_AS(c.integer("gravity"), InvalidArgument);
  CHECK_THROWS_AS(c.get("missing"), InvalidArgument);
  CHECK_THROWS_AS(c.assign("no_equals"), InvalidArgument);
  // a failed set leaves the old value
  CHECK_THROWS_AS(c.set("gravity", "-1"), InvalidArgument);
  CHECK(c.real("gravity") == 1.0);
}

TEST_CASE("number formatting") {
  CHECK(format_fixed17(1.0) == "1");
  CHECK(format_fixed17(-0.0) == "0");
  CHECK(format_fixed17(0.1) == "0.10000000000000001");
  CHECK(format_fixed17(std::sqrt(2.0)) == "1.4142135623730951");
  CHECK(format_fixed17(1e-20) == "9.9999999999999995e-21");
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(-0.0) == "0");
  CHECK(format_shortest(5e7) == "5e+07");
  CHECK(format_shortest(0.25) == "0.25");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    double x = std::ldexp(static_cast<double>(rng() >> 11), static_cast<int>(rng() % 200) - 150);
    CHECK(std::stod(format_fixed17(x)) == x);
    CHECK(std::stod(format_shortest(x)) == x);
  }
}
