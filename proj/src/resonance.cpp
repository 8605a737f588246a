#include "stokes_spectra/resonance.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>

#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/parallel.hpp"

namespace stokes_spectra {

namespace {

void validate(const ResonanceQuery& q) {
  if (q.signs.size() < 2) throw InvalidArgument("resonance query needs N >= 2");
  if (q.signs.size() != q.wavevectors.size())
    throw InvalidArgument("signs and wavevectors differ in length");
  for (int s : q.signs)
    if (s != 1 && s != -1) throw InvalidArgument("signs must be +1 or -1");
  for (int j : q.wavevectors)
    if (j == 0) throw InvalidArgument("wavevectors must be nonzero");
}

// C(n, k) as a double, enough for a budget comparison
double choose(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// next nondecreasing sequence over 0..top, positions from `first` on
bool advance(std::vector<int>& s, int first, int top) {
  for (int i = static_cast<int>(s.size()) - 1; i >= first; --i) {
    if (s[i] < top) {
      ++s[i];
      for (size_t k = i + 1; k < s.size(); ++k) s[k] = s[i];
      return true;
    }
  }
  return false;
}

struct Partial {
  std::uint64_t enumerated = 0, excluded = 0;
  double min_scaled = std::numeric_limits<double>::infinity();
  NWaveEntry argmin;
  std::vector<NWaveEntry> near;
  bool truncated = false;
};

double inner_norm(const std::vector<int>& ell) {
  int m = 0;
  for (int l : ell) m = std::max(m, std::abs(l));
  return m;
}

}  // namespace

double small_divisor(const ResonanceQuery& query) {
  validate(query);
  query.params.validate();
  double s = 0.0;
  for (size_t k = 0; k < query.signs.size(); ++k)
    s += query.signs[k] * omega_j(query.wavevectors[k], query.params);
  return s;
}

NWaveReport scan_nwave(int N, int p, int j_max, double tau, const PhysicalParams& params,
                       const NWaveOptions& options) {
  params.validate();
  if (N < 2) throw InvalidArgument("scan_nwave needs N >= 2");
  if (p < 1 || p > N) throw InvalidArgument("scan_nwave needs 1 <= p <= N");
  if (j_max < 1) throw InvalidArgument("scan_nwave needs j_max >= 1");
  if (!(options.threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  const int nv = 2 * j_max;
  const int q = N - p;
  const double count = choose(nv + p - 1, p) * (q > 0 ? choose(nv + q - 1, q) : 1.0);
  if (count > options.budget) {
    throw InvalidArgument("scan_nwave: " + std::to_string(count) +
                          " tuples exceed the enumeration budget " + std::to_string(options.budget));
  }

  // values ordered -j_max..-1, 1..j_max
  std::vector<int> value(nv);
  std::vector<double> om(nv);
  for (int i = 0; i < nv; ++i) {
    value[i] = i < j_max ? i - j_max : i - j_max + 1;
    om[i] = omega_j(value[i], params);
  }

  std::vector<Partial> parts(nv);
  parallel_for(
      nv,
      [&](int v0) {
        Partial& out = parts[v0];
        std::vector<int> plus(p, v0), minus(q, 0);
        std::vector<int> a(p), b(q), tuple(N);
        do {
          double sp = 0.0;
          for (int i = 0; i < p; ++i) sp += om[plus[i]];
          std::fill(minus.begin(), minus.end(), 0);
          do {
            double d = sp;
            int mx = 0;
            for (int i = 0; i < p; ++i) mx = std::max(mx, std::abs(value[plus[i]]));
            for (int i = 0; i < q; ++i) {
              d -= om[minus[i]];
              mx = std::max(mx, std::abs(value[minus[i]]));
            }
            ++out.enumerated;
            if (p == q) {
              for (int i = 0; i < p; ++i) a[i] = std::abs(value[plus[i]]);
              for (int i = 0; i < q; ++i) b[i] = std::abs(value[minus[i]]);
              std::sort(a.begin(), a.end());
              std::sort(b.begin(), b.end());
              if (a == b) {
                ++out.excluded;
                continue;
              }
            }
            const double scaled = std::abs(d) * std::pow(static_cast<double>(mx), tau);
            const bool best = scaled < out.min_scaled;
            const bool near = scaled < options.threshold;
            if (best || near) {
              for (int i = 0; i < p; ++i) tuple[i] = value[plus[i]];
              for (int i = 0; i < q; ++i) tuple[p + i] = value[minus[i]];
            }
            if (best) {
              out.min_scaled = scaled;
              out.argmin = {tuple, d, scaled};
            }
            if (near) {
              if (out.near.size() < options.max_report) out.near.push_back({tuple, d, scaled});
              else out.truncated = true;
            }
          } while (q > 0 && advance(minus, 0, nv - 1));
        } while (advance(plus, 1, nv - 1));
      },
      options.jobs);

  NWaveReport r;
  r.N = N;
  r.p = p;
  r.j_max = j_max;
  r.tau = tau;
  r.min_scaled = std::numeric_limits<double>::infinity();
  for (auto& part : parts) {
    r.enumerated += part.enumerated;
    r.excluded += part.excluded;
    if (part.min_scaled < r.min_scaled) {
      r.min_scaled = part.min_scaled;
      r.argmin = part.argmin;
    }
    for (auto& e : part.near) {
      if (r.near.size() < options.max_report) r.near.push_back(std::move(e));
      else r.truncated = true;
    }
    r.truncated = r.truncated || part.truncated;
  }
  return r;
}

bool check_melnikov(const std::vector<double>& omega, const std::vector<int>& ell, int j,
                    std::optional<int> j_prime, double mu_j, std::optional<double> mu_jp,
                    const MelnikovBudget& budget) {
  if (omega.size() != ell.size()) throw InvalidArgument("omega and ell differ in length");
  if (omega.empty()) throw InvalidArgument("empty frequency vector");
  if (!(budget.upsilon > 0.0)) throw InvalidArgument("upsilon must be positive");
  if (budget.d < 0.0) throw InvalidArgument("d must be nonnegative");
  if (j < 0) throw InvalidArgument("j must be >= 0");
  if (j_prime.has_value() != mu_jp.has_value())
    throw InvalidArgument("j' and mu_j' go together");
  double dot = 0.0;
  for (size_t i = 0; i < omega.size(); ++i) dot += omega[i] * ell[i];
  const double sup = inner_norm(ell);
  const double bracket = std::max(1.0, sup);

  if (j == 0) {
    if (j_prime) throw InvalidArgument("j' given without j");
    if (sup == 0.0) throw InvalidArgument("diophantine condition needs ell != 0");
    return std::abs(dot) >= budget.upsilon * std::pow(sup, -budget.tau);
  }
  if (!j_prime) {
    return std::abs(dot + mu_j) >= budget.upsilon * std::sqrt(j) * std::pow(bracket, -budget.tau);
  }
  if (*j_prime < 1) throw InvalidArgument("j' must be >= 1");
  if (sup == 0.0 && *j_prime == j) throw InvalidArgument("(ell, j, j') = (0, j, j) is excluded");
  const double rhs = budget.upsilon * std::pow(j, -budget.d) * std::pow(*j_prime, -budget.d) *
                     std::pow(bracket, -budget.tau);
  return std::abs(dot + mu_j - *mu_jp) >= rhs;
}

double resonant_tension(const ResonanceQuery& query, double lo, double hi) {
  validate(query);
  if (!(lo >= 0.0 && hi > lo)) throw InvalidArgument("tension bracket must satisfy 0 <= lo < hi");
  auto f = [&](double kappa) {
    ResonanceQuery q = query;
    q.params.surface_tension = kappa;
    return small_divisor(q);
  };
  const double fa = f(lo), fb = f(hi);
  if (fa == 0.0) return lo;
  if (fb == 0.0) return hi;
  if ((fa > 0) == (fb > 0)) throw InvalidArgument("no sign change of the divisor on the bracket");
  boost::uintmax_t iters = 200;
  const boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
  auto r = boost::math::tools::toms748_solve(f, lo, hi, fa, fb, tol, iters);
  if (iters >= 200) throw NumericalFailure("tension root did not converge", {{"lo", lo}, {"hi", hi}});
  return 0.5 * (r.first + r.second);
}

std::vector<WiltonPoint> wilton_tensions(int m_max, const PhysicalParams& params) {
  params.validate();
  if (m_max < 2) throw InvalidArgument("m_max must be >= 2");
  std::vector<WiltonPoint> out;
  const int samples = 4000;
  for (int M = 2; M <= m_max; ++M) {
    auto f = [&](double kappa) {
      PhysicalParams p = params;
      p.surface_tension = kappa;
      return omega_j(M, p) - M * omega_j(1, p);
    };
    double a = 1e-6, fa = f(a);
    for (int i = 1; i <= samples; ++i) {
      const double b = 1e-6 * std::pow(1e7, static_cast<double>(i) / samples);
      const double fb = f(b);
      if ((fa > 0) != (fb > 0)) {
        boost::uintmax_t iters = 200;
        const boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
        auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
        out.push_back({M, 0.5 * (r.first + r.second)});
      }
      a = b;
      fa = fb;
    }
  }
  return out;
}

}  // namespace stokes_spectra
