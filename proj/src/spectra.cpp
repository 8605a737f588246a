#include "stokes_spectra/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <lapacke.h>
#include <limits>

#include "assignment.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/parallel.hpp"

namespace stokes_spectra {

namespace {

using Mat = Eigen::MatrixXcd;

template <class F>
auto map_points(const std::vector<double>& xs, F&& f, int jobs) {
  using R = decltype(f(0.0));
  std::vector<R> out(xs.size());
  parallel_for(static_cast<int>(xs.size()), [&](int i) { out[i] = f(xs[i]); }, jobs);
  return out;
}

// singular values and thin left vectors via LAPACK
void svd_left(const Mat& a, Eigen::VectorXd& sv, Mat& u) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  const int k = std::min(m, n);
  Mat work = a;
  sv.resize(k);
  u.resize(m, k);
  std::vector<double> superb(std::max(1, k - 1));
  lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'N', m, n,
                                   reinterpret_cast<lapack_complex_double*>(work.data()), m, sv.data(),
                                   reinterpret_cast<lapack_complex_double*>(u.data()), m, nullptr, 1,
                                   superb.data());
  if (info != 0) throw NumericalFailure("SVD did not converge", {{"info", static_cast<double>(info)}});
}

bool less_lambda(const cplx& a, const cplx& b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return a.real() < b.real();
}

// permutation taking eigenvalue index in a to index in b
std::vector<int> match(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = std::norm(a[i] - b[j]);
  return detail::min_cost_assignment(cost);
}

bool ambiguous(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<int>& perm,
               double margin) {
  double scale = 1.0;
  for (const auto& z : a) scale = std::max(scale, std::abs(z));
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[perm[i]]);
    if (d <= 1e-12 * scale) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (static_cast<int>(j) == perm[i]) continue;
      if (std::abs(a[i] - b[j]) <= (1.0 + margin) * d) return true;
    }
  }
  return false;
}

void require_pure_gravity(const StokesWave& wave, const char* what) {
  const auto& p = wave.params;
  if (p.surface_tension != 0.0 || p.vorticity != 0.0) {
    throw InvalidArgument(std::string(what) + ": pure gravity waves only (kappa = gamma = 0)");
  }
}

}  // namespace

// ------------------------------------------------------------------ bands

BandAtlas trace_bands(const StokesWave& wave, std::vector<double> mu_grid, const TraceOptions& o) {
  if (mu_grid.empty()) throw InvalidArgument("trace_bands: empty mu grid");
  for (double m : mu_grid) {
    if (!std::isfinite(m) || m < -0.5 || m >= 0.5) {
      throw InvalidArgument("trace_bands: mu grid must lie in [-1/2, 1/2)");
    }
  }
  std::sort(mu_grid.begin(), mu_grid.end());
  mu_grid.erase(std::unique(mu_grid.begin(), mu_grid.end()), mu_grid.end());

  auto solve = [&](double mu) { return eigenvalues(assemble(wave, mu, o.bloch)); };
  BandAtlas atlas;
  atlas.mu_grid = mu_grid;
  atlas.slices = map_points(mu_grid, solve, o.jobs);

  for (int level = 0; level < o.max_refine; ++level) {
    std::vector<double> extra;
    for (size_t i = 0; i + 1 < atlas.slices.size(); ++i) {
      const auto& a = atlas.slices[i];
      const auto& b = atlas.slices[i + 1];
      bool refine = a.unstable_count != b.unstable_count;
      if (!refine) {
        auto perm = match(a.eigenvalues, b.eigenvalues);
        refine = ambiguous(a.eigenvalues, b.eigenvalues, perm, o.ambiguity);
      }
      if (refine) extra.push_back(0.5 * (atlas.mu_grid[i] + atlas.mu_grid[i + 1]));
    }
    if (extra.empty()) break;
    auto fresh = map_points(extra, solve, o.jobs);
    atlas.refinements += static_cast<int>(extra.size());
    std::vector<double> grid;
    std::vector<SpectrumSlice> slices;
    size_t e = 0;
    for (size_t i = 0; i < atlas.mu_grid.size(); ++i) {
      grid.push_back(atlas.mu_grid[i]);
      slices.push_back(std::move(atlas.slices[i]));
      if (e < extra.size() && i + 1 < atlas.mu_grid.size() && extra[e] < atlas.mu_grid[i + 1] &&
          extra[e] > atlas.mu_grid[i]) {
        grid.push_back(extra[e]);
        slices.push_back(std::move(fresh[e]));
        ++e;
      }
    }
    atlas.mu_grid = std::move(grid);
    atlas.slices = std::move(slices);
  }

  const size_t nb = atlas.slices.front().eigenvalues.size();
  atlas.bands.assign(nb, std::vector<cplx>(atlas.slices.size()));
  std::vector<int> where(nb);  // band -> index in current slice
  for (size_t b = 0; b < nb; ++b) {
    where[b] = static_cast<int>(b);
    atlas.bands[b][0] = atlas.slices[0].eigenvalues[b];
  }
  for (size_t i = 0; i + 1 < atlas.slices.size(); ++i) {
    auto perm = match(atlas.slices[i].eigenvalues, atlas.slices[i + 1].eigenvalues);
    const double dmu = atlas.mu_grid[i + 1] - atlas.mu_grid[i];
    for (size_t b = 0; b < nb; ++b) {
      where[b] = perm[where[b]];
      atlas.bands[b][i + 1] = atlas.slices[i + 1].eigenvalues[where[b]];
      atlas.max_speed =
          std::max(atlas.max_speed, std::abs(atlas.bands[b][i + 1] - atlas.bands[b][i]) / dmu);
    }
  }
  return atlas;
}

// --------------------------------------------------------------- figure 8

NearZero near_zero(const StokesWave& wave, double mu, const BlochOptions& options) {
  auto s = eigenvalues(assemble(wave, mu, options));
  auto v = s.eigenvalues;
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    const double da = std::abs(a), db = std::abs(b);
    if (da != db) return da < db;
    return less_lambda(a, b);
  });
  v.resize(std::min<size_t>(4, v.size()));
  std::sort(v.begin(), v.end(), less_lambda);
  NearZero nz;
  nz.mu = mu;
  nz.max_real = -std::numeric_limits<double>::infinity();
  for (const auto& z : v) {
    nz.max_real = std::max(nz.max_real, z.real());
    if (is_unstable(z, options.cutoff)) nz.unstable = true;
  }
  nz.values = std::move(v);
  return nz;
}

Figure8Report extract_figure8(const StokesWave& wave, const Figure8Options& o) {
  require_pure_gravity(wave, "extract_figure8");
  if (o.grid < 2) throw InvalidArgument("extract_figure8: grid needs at least 2 points");
  Figure8Report r;
  r.epsilon = wave.amplitude;
  if (wave.amplitude == 0.0) {
    r.reason = "flat state";
    return r;
  }
  const double eps = std::abs(wave.amplitude);
  double mu_max = o.mu_max > 0.0 ? o.mu_max : std::min(0.5, 4.0 * eps);
  auto probe = [&](double mu) { return near_zero(wave, mu, o.bloch); };

  for (int pass = 0;; ++pass) {
    std::vector<double> grid;
    for (int k = 1; k <= o.grid; ++k) grid.push_back(mu_max * k / o.grid);
    for (int k = 1; k <= o.geometric; ++k) grid.push_back(mu_max * std::ldexp(1.0, -k));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    // 0.5 is the same slice as -0.5; stay inside the zone
    while (!grid.empty() && grid.back() >= 0.5) grid.pop_back();
    r.samples = map_points(grid, probe, o.jobs);
    r.slices += static_cast<int>(grid.size());
    if (!r.samples.back().unstable || mu_max >= 0.5 || pass >= 3) break;
    mu_max = std::min(0.5, 2.0 * mu_max);
  }

  int last = -1;
  int best = -1;
  bool inside = false;
  for (size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    if (s.unstable) {
      if (!inside) ++r.unstable_regions;
      inside = true;
      last = static_cast<int>(i);
      if (best < 0 || s.max_real > r.samples[best].max_real) best = static_cast<int>(i);
    } else {
      inside = false;
    }
  }
  if (last < 0) {
    r.reason = "no unstable eigenvalue near the origin";
    return r;
  }
  r.exists = true;
  if (!o.locate) {
    r.mu_bar = r.samples[last].mu;
    r.apex_mu = r.samples[best].mu;
    r.apex_real = r.samples[best].max_real;
    for (const auto& z : r.samples[best].values)
      if (z.real() == r.apex_real) r.apex_lambda = z;
    return r;
  }

  if (last + 1 < static_cast<int>(r.samples.size())) {
    double lo = r.samples[last].mu, hi = r.samples[last + 1].mu;
    while (hi - lo > o.mu_tol) {
      const double mid = 0.5 * (lo + hi);
      (probe(mid).unstable ? lo : hi) = mid;
      ++r.slices;
    }
    r.mu_bar = 0.5 * (lo + hi);
  } else {
    r.mu_bar = r.samples[last].mu;
    r.reason = "unstable up to the end of the scanned window";
  }

  // golden section for the apex
  auto apex_of = [](const NearZero& s) {
    cplx z = s.values.front();
    for (const auto& w : s.values)
      if (w.real() > z.real()) z = w;
    return z;
  };
  NearZero top = r.samples[best];
  double a = best > 0 ? r.samples[best - 1].mu : 0.5 * r.samples[best].mu;
  double b = best + 1 < static_cast<int>(r.samples.size()) ? r.samples[best + 1].mu
                                                           : r.samples[best].mu;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  NearZero f1 = probe(x1), f2 = probe(x2);
  r.slices += 2;
  while (b - a > o.apex_tol) {
    if (f1.max_real >= f2.max_real) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = probe(x2);
    }
    ++r.slices;
    if (f1.max_real > top.max_real) top = f1;
    if (f2.max_real > top.max_real) top = f2;
  }
  r.apex_mu = top.mu;
  r.apex_lambda = apex_of(top);
  r.apex_real = r.apex_lambda.real();
  return r;
}

// ----------------------------------------------------------------- WB scan

WbReport scan_wb_threshold(const std::vector<double>& h_grid, double epsilon, const WbOptions& o) {
  if (h_grid.size() < 2) throw InvalidArgument("scan_wb_threshold: need at least two depths");
  if (!(epsilon > 0.0)) throw InvalidArgument("scan_wb_threshold: epsilon must be positive");
  for (size_t i = 0; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > 0.0) || !std::isfinite(h_grid[i]))
      throw InvalidArgument("scan_wb_threshold: depths must be positive and finite");
    if (i > 0 && h_grid[i] <= h_grid[i - 1])
      throw InvalidArgument("scan_wb_threshold: depth grid must be strictly increasing");
  }
  WbReport rep;
  rep.epsilon = epsilon;
  auto sample = [&](double h, bool refine) {
    PhysicalParams p = o.params;
    p.depth = Depth::finite(h);
    auto w = solve_stokes(epsilon, p, o.stokes);
    if (!w.converged) {
      throw NumericalFailure("Stokes solve failed during the depth scan",
                             {{"h", h}, {"epsilon", epsilon}, {"residual", w.residual_norm}});
    }
    Figure8Options f = o.figure8;
    f.locate = refine;
    auto r = extract_figure8(w, f);
    return WbSample{h, r.exists, r.exists ? r.apex_real / (epsilon * epsilon) : 0.0};
  };
  for (double h : h_grid) rep.grid.push_back(sample(h, true));
  int k = -1;
  for (size_t i = 0; i + 1 < rep.grid.size(); ++i) {
    if (!rep.grid[i].exists && rep.grid[i + 1].exists) {
      k = static_cast<int>(i);
      break;
    }
  }
  if (k < 0) {
    rep.reason = "depth grid does not bracket a change of stability";
    return rep;
  }
  rep.bracketed = true;
  double lo = h_grid[k], hi = h_grid[k + 1];
  while (hi - lo > o.h_tol) {
    const double mid = 0.5 * (lo + hi);
    auto s = sample(mid, false);
    rep.bisection.push_back(s);
    (s.exists ? hi : lo) = mid;
  }
  rep.threshold_h = 0.5 * (lo + hi);
  return rep;
}

// ------------------------------------------------------------------ isolas

EllipseFit fit_ellipse(const std::vector<cplx>& pts) {
  EllipseFit f;
  const int n = static_cast<int>(pts.size());
  if (n < 4) return f;
  double ybar = 0.0;
  for (const auto& z : pts) ybar += z.imag();
  ybar /= n;
  double yscale = 0.0;
  for (const auto& z : pts) yscale = std::max(yscale, std::abs(z.imag() - ybar));
  if (yscale == 0.0) return f;
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const double t = (pts[i].imag() - ybar) / yscale;
    A(i, 0) = 1.0;
    A(i, 1) = t;
    A(i, 2) = t * t;
    rhs[i] = pts[i].real() * pts[i].real();
  }
  Eigen::Vector3d q = A.colPivHouseholderQr().solve(rhs);
  if (!(q[2] < 0.0)) return f;
  const double t0 = -q[1] / (2.0 * q[2]);
  const double r2 = q[0] - q[1] * q[1] / (4.0 * q[2]);
  if (!(r2 > 0.0)) return f;
  f.center = ybar + t0 * yscale;
  f.semiaxis_real = std::sqrt(r2);
  f.semiaxis_imag = std::sqrt(r2 / -q[2]) * yscale;
  f.residual = std::sqrt((A * q - rhs).squaredNorm() / n) / r2;
  f.ok = true;
  return f;
}

namespace {

struct PairSample {
  double mu = 0.0;
  cplx upper{0.0, 0.0};  // larger real part
  cplx lower{0.0, 0.0};
  double gap = 0.0;
  bool unstable = false;
};

}  // namespace

Isola extract_isola(const StokesWave& wave, int p, const IsolaOptions& o) {
  if (p < 2) throw InvalidArgument("extract_isola: p must be >= 2");
  Isola is;
  is.p = p;
  is.epsilon = wave.amplitude;
  if (o.mu_collision >= 0.0) {
    is.mu_flat = o.mu_collision;
    is.omega_star = o.omega_star;
  } else {
    auto cs = find_collisions(p, wave.params);
    const CollisionPoint* c = nullptr;
    for (const auto& q : cs.points) {
      if (q.p == p) {
        c = &q;
        break;
      }
    }
    if (!c) {
      is.reason = "no collision of the flat branches for this p";
      return is;
    }
    is.mu_flat = c->mu;
    is.omega_star = c->omega_star;
  }
  if (is.mu_flat >= 0.5) is.mu_flat -= 1.0;
  if (wave.amplitude == 0.0) {
    is.reason = "flat state";
    return is;
  }

  const double ystar = is.omega_star;
  auto pair_at = [&](double mu) {
    auto s = eigenvalues(assemble(wave, mu, o.bloch));
    auto v = s.eigenvalues;
    std::partial_sort(v.begin(), v.begin() + 2, v.end(), [&](const cplx& a, const cplx& b) {
      return std::abs(a - cplx(0.0, ystar)) < std::abs(b - cplx(0.0, ystar));
    });
    PairSample ps;
    ps.mu = mu;
    ps.upper = v[0].real() >= v[1].real() ? v[0] : v[1];
    ps.lower = v[0].real() >= v[1].real() ? v[1] : v[0];
    ps.gap = std::abs(v[0].imag() - v[1].imag());
    ps.unstable = is_unstable(ps.upper, o.bloch.cutoff) &&
                  std::abs(ps.upper.imag() - ystar) < o.band;
    return ps;
  };
  auto count = [&](PairSample s) {
    ++is.slices;
    return s;
  };

  // golden section on the imaginary gap; stops on the first unstable sample
  const double eps_p = std::pow(std::abs(wave.amplitude), p);
  double w = o.halfwidth > 0.0 ? o.halfwidth : 10.0 * eps_p;
  std::vector<PairSample> seen;
  const PairSample* seed = nullptr;
  for (int attempt = 0; attempt <= o.widen && !seed; ++attempt, w *= 4.0) {
    seen.clear();
    double a = is.mu_flat - w, b = is.mu_flat + w;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    seen.push_back(count(pair_at(x1)));
    seen.push_back(count(pair_at(x2)));
    PairSample f1 = seen[0], f2 = seen[1];
    while (!f1.unstable && !f2.unstable && b - a > 1e-14) {
      if (f1.gap <= f2.gap) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = count(pair_at(x1));
        seen.push_back(f1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = count(pair_at(x2));
        seen.push_back(f2);
      }
    }
    for (const auto& s : seen)
      if (s.unstable) seed = &s;
    if (seed) break;
    // minimum strictly inside: no isola at this resolution
    const double edge = 0.01 * w;
    if (a > is.mu_flat - w + edge && b < is.mu_flat + w - edge) break;
  }
  if (!seed) {
    is.reason = "no unstable eigenvalue near the collision";
    return is;
  }

  // bracket both edges of the unstable window
  const double mu_s = seed->mu;
  double aL = is.mu_flat - w, bL = mu_s, aR = mu_s, bR = is.mu_flat + w;
  for (const auto& s : seen) {
    if (s.unstable) {
      bL = std::min(bL, s.mu);
      aR = std::max(aR, s.mu);
    }
  }
  for (const auto& s : seen) {
    if (s.unstable) continue;
    if (s.mu < bL) aL = std::max(aL, s.mu);
    if (s.mu > aR) bR = std::min(bR, s.mu);
  }
  for (int it = 0; it < 400; ++it) {
    const double width = aR - bL;
    const double tol = std::max(o.edge_tol * width, 1e-15);
    const bool left_done = bL - aL <= tol, right_done = bR - aR <= tol;
    if (left_done && right_done) break;
    if (!left_done && (right_done || bL - aL >= bR - aR)) {
      const double mid = 0.5 * (aL + bL);
      (count(pair_at(mid)).unstable ? bL : aL) = mid;
    } else {
      const double mid = 0.5 * (aR + bR);
      (count(pair_at(mid)).unstable ? aR : bR) = mid;
    }
  }
  is.mu_lo = 0.5 * (aL + bL);
  is.mu_hi = 0.5 * (aR + bR);

  std::vector<double> mus;
  for (int i = 0; i < o.samples; ++i) mus.push_back(is.mu_lo + (is.mu_hi - is.mu_lo) * (i + 1.0) / (o.samples + 1.0));
  auto samples = map_points(mus, pair_at, o.jobs);
  is.slices += o.samples;
  std::vector<cplx> pts;
  for (const auto& s : samples) {
    cplx z = s.upper;
    if (z.real() < 0.0) z = cplx(0.0, z.imag());
    is.points.push_back({s.mu, z});
    pts.push_back(z);
    is.max_real = std::max(is.max_real, z.real());
  }
  auto fit = fit_ellipse(pts);
  if (!fit.ok) {
    is.reason = "ellipse fit failed";
    return is;
  }
  is.found = true;
  is.center_imag = fit.center;
  is.semiaxis_real = fit.semiaxis_real;
  is.semiaxis_imag = fit.semiaxis_imag;
  is.ellipse_residual = fit.residual;
  return is;
}

// -------------------------------------------------------------------- Kato

Eigen::Matrix4cd j4() {
  Eigen::Matrix4cd j = Eigen::Matrix4cd::Zero();
  j(0, 1) = 1.0;
  j(1, 0) = -1.0;
  j(2, 3) = 1.0;
  j(3, 2) = -1.0;
  return j;
}

ReducedMatrix4 kato_reduce(const StokesWave& wave, double mu, const KatoOptions& o) {
  if (o.nodes < 4 || o.max_nodes < o.nodes) throw InvalidArgument("kato_reduce: bad node counts");
  auto op = assemble(wave, mu, o.bloch);
  const Mat& L = op.matrix.entries;
  const int n = static_cast<int>(L.rows());
  auto slice = eigenvalues(op);

  ReducedMatrix4 r;
  r.mu = mu;
  r.epsilon = wave.amplitude;
  std::vector<cplx> ev = slice.eigenvalues;
  std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
  cplx center = o.center;
  if (o.auto_center) center = 0.25 * (ev[0] + ev[1] + ev[2] + ev[3]);
  std::vector<double> dist;
  for (const auto& z : ev) dist.push_back(std::abs(z - center));
  std::vector<size_t> order(ev.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return dist[a] < dist[b]; });
  const double radius = o.radius > 0.0 ? o.radius : 0.5 * dist[order[4]];
  int enclosed = 0;
  for (double d : dist)
    if (d < radius) ++enclosed;
  if (enclosed != 4) {
    throw NumericalFailure("Kato contour does not enclose exactly four eigenvalues",
                           {{"enclosed", static_cast<double>(enclosed)}, {"mu", mu}, {"radius", radius}});
  }
  r.center = center;
  r.radius = radius;
  std::vector<cplx> inside;
  for (size_t i = 0; i < 4; ++i) inside.push_back(ev[order[i]]);
  std::sort(inside.begin(), inside.end(), less_lambda);
  for (int i = 0; i < 4; ++i) r.full_nearest[i] = inside[i];

  // trapezoid rule; shift = 0.5 gives the nodes that double a rule
  auto quadrature = [&](int m, double shift) {
    Mat sum = Mat::Zero(n, n);
    const int block = 8;
    for (int k0 = 0; k0 < m; k0 += block) {
      const int cnt = std::min(block, m - k0);
      std::vector<Mat> part(cnt);
      parallel_for(cnt, [&](int t) {
        const double th = 2.0 * M_PI * (k0 + t + shift) / m;
        const cplx e = std::exp(cplx(0.0, th));
        Mat A = L;
        A.diagonal().array() -= center + radius * e;
        part[t] = (e * Eigen::PartialPivLU<Mat>(A).inverse()).eval();
      }, o.jobs);
      for (const auto& q : part) sum += q;
    }
    return (-(radius / m) * sum).eval();
  };
  int m = o.nodes;
  Mat P = quadrature(m, 0.0);
  double change = std::numeric_limits<double>::infinity();
  while (m * 2 <= o.max_nodes) {
    Mat P2 = 0.5 * (P + quadrature(m, 0.5));
    change = (P2 - P).cwiseAbs().maxCoeff();
    P = std::move(P2);
    m *= 2;
    if (change <= o.stability) break;
  }
  r.nodes = m;
  r.quadrature_change = change;
  if (!(change <= o.stability)) {
    throw NumericalFailure("Kato quadrature did not stabilise",
                           {{"nodes", static_cast<double>(m)}, {"change", change}, {"mu", mu}});
  }

  Eigen::VectorXd sv;
  Mat Uall;
  svd_left(P, sv, Uall);
  r.rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-6 * sv[0]) ++r.rank;
  r.trace = P.trace().real();
  if (r.rank != 4) {
    throw NumericalFailure("Kato projector rank is not four",
                           {{"rank", static_cast<double>(r.rank)}, {"enclosed", 4.0}, {"mu", mu},
                            {"sigma1", sv[0]}, {"sigma5", sv[4]}, {"trace", r.trace},
                            {"radius", radius}, {"center_imag", center.imag()}});
  }

  const double normP = P.norm();
  const double normL = L.norm();
  const Mat Jinv = structure_inverse(op.N, mu, wave.params.vorticity);
  const Mat S = reversal_sign(op.N);
  r.idempotency = (P * P - P).norm() / normP;
  r.commutation = (P * L - L * P).norm() / normL;
  const Mat K = Jinv * P;
  r.skew_hamiltonian = (K.adjoint() + K).norm() / normP;
  r.reversibility = (S * P.conjugate() - P * S).norm() / normP;

  // rho-fixed vectors: eta coefficients real, psi coefficients imaginary
  const int half = n / 2;
  const Mat U = Uall.leftCols(4);
  Eigen::MatrixXd R(n, 8);
  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXcd u = U.col(j);
    Eigen::VectorXcd ru = S * u.conjugate();
    Eigen::VectorXcd v1 = 0.5 * (u + ru);
    Eigen::VectorXcd v2 = (u - ru) / cplx(0.0, 2.0);
    R.col(2 * j).head(half) = v1.head(half).real();
    R.col(2 * j).tail(half) = v1.tail(half).imag();
    R.col(2 * j + 1).head(half) = v2.head(half).real();
    R.col(2 * j + 1).tail(half) = v2.tail(half).imag();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(R, Eigen::ComputeThinU);
  if (rsvd.singularValues()[4] > 1e-6 * rsvd.singularValues()[0]) {
    throw NumericalFailure("projector range is not closed under the reversal",
                           {{"mu", mu}, {"sigma5", rsvd.singularValues()[4]}});
  }
  Mat Q(n, 4);
  for (int j = 0; j < 4; ++j) {
    Q.col(j).head(half) = rsvd.matrixU().col(j).head(half).cast<cplx>();
    Q.col(j).tail(half) = cplx(0.0, 1.0) * rsvd.matrixU().col(j).tail(half).cast<cplx>();
  }
  const Mat W0 = Q.adjoint() * Jinv * Q;
  Eigen::Matrix4d H = (cplx(0.0, 1.0) * W0).real();
  H = 0.5 * (H + H.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(H);
  const auto& d = es.eigenvalues();
  if (!(d[0] < 0 && d[1] < 0 && d[2] > 0 && d[3] > 0)) {
    throw NumericalFailure("projector range is not symplectic",
                           {{"mu", mu}, {"d0", d[0]}, {"d1", d[1]}, {"d2", d[2]}, {"d3", d[3]}});
  }
  Mat Fb(n, 4);
  const double s2 = std::sqrt(2.0);
  for (int pr = 0; pr < 2; ++pr) {
    const int ip = 3 - pr, in = pr;  // largest positive with most negative
    Eigen::VectorXcd gp = Q * es.eigenvectors().col(ip).cast<cplx>() / std::sqrt(d[ip]);
    Eigen::VectorXcd gn = Q * es.eigenvectors().col(in).cast<cplx>() / std::sqrt(-d[in]);
    Fb.col(2 * pr) = (gp + gn) / s2;
    Fb.col(2 * pr + 1) = cplx(0.0, -1.0) * (gp - gn) / s2;
  }
  Eigen::Matrix4cd J4inv = -j4();
  r.symplectic_defect = (Fb.adjoint() * Jinv * Fb - J4inv).norm();
  r.basis_reversal_defect = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    Eigen::VectorXcd f = Fb.col(j);
    r.basis_reversal_defect =
        std::max(r.basis_reversal_defect, (S * f.conjugate() - sign * f).norm() / f.norm());
  }
  const Eigen::Matrix4cd B4 = Fb.adjoint() * Jinv * L * Fb;
  r.hermitian_defect = (B4 - B4.adjoint()).norm() / B4.norm();
  r.entries = j4() * B4;
  r.E = B4.block<2, 2>(0, 0);
  r.F = B4.block<2, 2>(0, 2);
  r.G = B4.block<2, 2>(2, 2);
  r.invariance_defect = (L * Fb - Fb * r.entries).norm() / normL;
  r.basis = Fb;

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> ces(r.entries, false);
  std::vector<cplx> lam(ces.eigenvalues().data(), ces.eigenvalues().data() + 4);
  std::sort(lam.begin(), lam.end(), less_lambda);
  for (int i = 0; i < 4; ++i) r.eigenvalues[i] = lam[i];
  return r;
}

}  // namespace stokes_spectra
