#include "stokes_spectra/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "stokes_spectra/error.hpp"

namespace stokes_spectra {

double stable_tanh(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return -1.0;
  return std::tanh(x);
}

double symbol_g0(double xi, const Depth& depth) {
  if (depth.is_infinite()) return std::abs(xi);
  return xi * stable_tanh(depth.value() * xi);
}

namespace {

// G0(phi) / phi, continuous through phi = 0 for finite depth.
double g0_over_xi(double xi, const Depth& depth) {
  if (xi == 0.0) return 0.0;
  if (depth.is_infinite()) return xi > 0.0 ? 1.0 : -1.0;
  return stable_tanh(depth.value() * xi);
}

}  // namespace

double omega_j(int j, const PhysicalParams& params) {
  if (j == 0) throw InvalidArgument("omega_j: the zero mode is not part of the phase space");
  const double xi = static_cast<double>(j);
  const double g0 = symbol_g0(xi, params.depth);
  const double ratio = g0_over_xi(xi, params.depth);
  const double gamma = params.vorticity;
  const double radicand =
      g0 * (params.gravity + params.surface_tension * xi * xi + 0.25 * gamma * gamma * g0 / (xi * xi));
  return std::sqrt(radicand) + 0.5 * gamma * ratio;
}

double omega_sigma(double phi, int sigma, const PhysicalParams& params) {
  const double g0 = symbol_g0(phi, params.depth);
  const double ratio = g0_over_xi(phi, params.depth);
  const double gamma = params.vorticity;
  const double radicand = g0 * (params.gravity + params.surface_tension * phi * phi) +
                          0.25 * gamma * gamma * ratio * ratio;
  const double s = sigma >= 0 ? 1.0 : -1.0;
  return params.linear_speed() * phi - 0.5 * gamma * ratio - s * std::sqrt(std::max(radicand, 0.0));
}

double omega_sigma(double phi, int sigma, const Depth& depth) {
  PhysicalParams params;
  params.depth = depth;
  // g = 1, kappa = gamma = 0: linear speed is c_h.
  const double s = sigma >= 0 ? 1.0 : -1.0;
  return params.c_h() * phi - s * std::sqrt(std::max(symbol_g0(phi, depth), 0.0));
}

namespace {

struct BranchFn {
  const PhysicalParams* params;
  double c;
  double operator()(double phi, int sigma) const {
    const double g0 = symbol_g0(phi, params->depth);
    const double ratio = g0_over_xi(phi, params->depth);
    const double gamma = params->vorticity;
    const double radicand = g0 * (params->gravity + params->surface_tension * phi * phi) +
                            0.25 * gamma * gamma * ratio * ratio;
    return c * phi - 0.5 * gamma * ratio - sigma * std::sqrt(std::max(radicand, 0.0));
  }
};

}  // namespace

CollisionSearch find_collisions(int p_max, const PhysicalParams& params,
                                const CollisionOptions& options) {
  params.validate();
  if (p_max < 2) throw InvalidArgument("find_collisions: p_max must be >= 2");
  if (options.j_max < p_max) throw InvalidArgument("find_collisions: j window smaller than p_max");
  if (options.mu_samples < 10) throw InvalidArgument("find_collisions: too few mu samples");

  const BranchFn omega{&params, params.linear_speed()};
  const int n = options.mu_samples;
  CollisionSearch out;

  for (int p = 2; p <= p_max; ++p) {
    std::vector<CollisionPoint> found;
    for (int j2 = -options.j_max; j2 + p <= options.j_max; ++j2) {
      const int j1 = j2 + p;
      for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
          auto f = [&](double mu) { return omega(j1 + mu, s1) - omega(j2 + mu, s2); };
          double prev_mu = 0.0;
          double prev = f(0.0);
          for (int i = 1; i <= n; ++i) {
            const double mu = static_cast<double>(i) / n;
            const double cur = f(mu);
            double root = -1.0;
            if (prev == 0.0) {
              root = prev_mu;
            } else if ((prev < 0.0) != (cur < 0.0) && cur != 0.0) {
              double a = prev_mu, b = mu, fa = prev;
              for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (std::abs(fm) <= options.tolerance * 1e-2 || b - a < 1e-17) {
                  a = b = m;
                  break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                  a = m;
                  fa = fm;
                } else {
                  b = m;
                }
              }
              root = 0.5 * (a + b);
            }
            if (root >= 0.0) {
              CollisionPoint cp;
              cp.p = p;
              cp.first = {j1, s1};
              cp.second = {j2, s2};
              cp.mu = root;
              cp.omega_star = omega(j1 + root, s1);
              cp.defect = std::abs(f(root));
              if (cp.mu >= 1.0 - 1e-14) {
                cp.mu -= 1.0;
                cp.first.j += 1;
                cp.second.j += 1;
              }
              if (cp.mu < 0.0) cp.mu = 0.0;
              if (cp.omega_star > 1e-9 && cp.defect <= options.tolerance) found.push_back(cp);
            }
            prev_mu = mu;
            prev = cur;
          }
        }
      }
    }
    std::sort(found.begin(), found.end(), [](const CollisionPoint& a, const CollisionPoint& b) {
      return std::tie(a.omega_star, a.mu) < std::tie(b.omega_star, b.mu);
    });
    // Grid-point roots show up from both neighbouring cells and at mu = 0 / 1.
    std::vector<CollisionPoint> unique;
    for (const auto& cp : found) {
      const bool dup = std::any_of(unique.begin(), unique.end(), [&](const CollisionPoint& u) {
        return std::abs(u.mu - cp.mu) < 1e-10 && std::abs(u.omega_star - cp.omega_star) < 1e-10 &&
               u.first.sigma == cp.first.sigma && u.second.sigma == cp.second.sigma;
      });
      if (!dup) unique.push_back(cp);
    }
    if (unique.empty()) out.missing.push_back(p);
    out.points.insert(out.points.end(), unique.begin(), unique.end());
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const CollisionPoint& a, const CollisionPoint& b) {
              return std::tie(a.omega_star, a.mu, a.p) < std::tie(b.omega_star, b.mu, b.p);
            });
  out.zero_branches = zero_branches(params);
  return out;
}

std::vector<BranchId> zero_branches(const PhysicalParams& params, int j_max) {
  const BranchFn omega{&params, params.linear_speed()};
  std::vector<BranchId> out;
  for (int j = -j_max; j <= j_max; ++j) {
    for (int s : {1, -1}) {
      if (std::abs(omega(j, s)) < 1e-13) out.push_back({j, s});
    }
  }
  return out;
}

}  // namespace stokes_spectra
