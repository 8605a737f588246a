#include "stokes_spectra/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spectral.hpp"
#include "stokes_spectra/error.hpp"

namespace stokes_spectra {

PeriodicFunction::PeriodicFunction(int N, Parity parity) : n_(N), parity_(parity) {
  if (N < 0) throw InvalidArgument("truncation must be nonnegative");
  c_.assign(2 * N + 1, cplx(0.0));
}

PeriodicFunction PeriodicFunction::from_coefficients(std::vector<cplx> coefficients, Parity parity,
                                                     bool complex_valued) {
  if (coefficients.size() % 2 != 1) {
    throw InvalidArgument("coefficient array must have odd length 2N+1");
  }
  PeriodicFunction f;
  f.n_ = static_cast<int>(coefficients.size() / 2);
  f.c_ = std::move(coefficients);
  f.parity_ = parity;
  f.complex_ = complex_valued;
  return f;
}

PeriodicFunction PeriodicFunction::from_samples(const std::vector<double>& values, int N) {
  if (values.empty()) throw InvalidArgument("no samples");
  const int n = static_cast<int>(values.size());
  if (2 * N + 1 > n) throw InvalidArgument("too few samples for the requested truncation");
  detail::Samples<cplx> s(n, 0.0);
  for (int i = 0; i < n; ++i) s.v[i] = values[i];
  auto series = detail::to_series(s, N);
  PeriodicFunction f(N);
  f.c_ = std::move(series.c);
  // Nyquist-free projection of real data is real up to roundoff.
  for (int k = 1; k <= N; ++k) {
    const cplx avg = 0.5 * (f.c_[N + k] + std::conj(f.c_[N - k]));
    f.c_[N + k] = avg;
    f.c_[N - k] = std::conj(avg);
  }
  f.c_[N] = f.c_[N].real();
  return f;
}

PeriodicFunction PeriodicFunction::constant(int N, double value) {
  PeriodicFunction f(N, Parity::even);
  f.c_[N] = value;
  return f;
}

PeriodicFunction PeriodicFunction::cosine(int N, double amplitude, int k) {
  PeriodicFunction f(N, Parity::even);
  if (k < 0 || k > N) throw InvalidArgument("cosine mode outside truncation");
  if (k == 0) {
    f.c_[N] = amplitude;
  } else {
    f.set_coeff(k, 0.5 * amplitude);
  }
  return f;
}

PeriodicFunction PeriodicFunction::sine(int N, double amplitude, int k) {
  PeriodicFunction f(N, Parity::odd);
  if (k <= 0 || k > N) throw InvalidArgument("sine mode outside truncation");
  f.set_coeff(k, cplx(0.0, -0.5 * amplitude));
  return f;
}

cplx PeriodicFunction::coeff(int k) const noexcept {
  if (k < -n_ || k > n_) return cplx(0.0);
  return c_[k + n_];
}

void PeriodicFunction::set_coeff(int k, cplx value) {
  if (k < -n_ || k > n_) throw InvalidArgument("mode outside truncation");
  c_[k + n_] = value;
  if (!complex_) {
    if (k == 0) {
      c_[n_] = value.real();
    } else {
      c_[n_ - k] = std::conj(value);
    }
  }
}

double PeriodicFunction::cos_coeff(int k) const {
  if (k == 0) return coeff(0).real();
  return 2.0 * coeff(k).real();
}

double PeriodicFunction::sin_coeff(int k) const {
  if (k == 0) return 0.0;
  return -2.0 * coeff(k).imag();
}

double PeriodicFunction::evaluate(double x) const {
  cplx sum = c_[n_];
  for (int k = 1; k <= n_; ++k) {
    const cplx e = std::polar(1.0, k * x);
    sum += c_[n_ + k] * e + c_[n_ - k] * std::conj(e);
  }
  return sum.real();
}

std::vector<double> PeriodicFunction::samples(int n_samples) const {
  if (n_samples < 2 * n_ + 1) {
    std::vector<double> out(n_samples);
    for (int i = 0; i < n_samples; ++i) out[i] = evaluate(2.0 * std::numbers::pi * i / n_samples);
    return out;
  }
  detail::Series<cplx> s(n_, 0.0);
  s.c = c_;
  auto g = detail::to_grid(s, n_samples);
  std::vector<double> out(n_samples);
  for (int i = 0; i < n_samples; ++i) out[i] = g.v[i].real();
  return out;
}

double PeriodicFunction::reality_defect() const {
  double d = std::abs(c_[n_].imag());
  for (int k = 1; k <= n_; ++k) d = std::max(d, std::abs(c_[n_ + k] - std::conj(c_[n_ - k])));
  return d;
}

double PeriodicFunction::parity_defect(Parity parity) const {
  if (parity == Parity::none) return 0.0;
  double d = 0.0;
  for (int k = 1; k <= n_; ++k) {
    const cplx sym = parity == Parity::even ? c_[n_ + k] - c_[n_ - k] : c_[n_ + k] + c_[n_ - k];
    d = std::max(d, std::abs(sym));
  }
  if (parity == Parity::odd) d = std::max(d, std::abs(c_[n_]));
  return d;
}

double PeriodicFunction::sup_norm() const {
  const int n = std::max(64, detail::next_pow2(8 * n_ + 8));
  auto v = samples(n);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double PeriodicFunction::l2_norm() const {
  double s = 0.0;
  for (const auto& z : c_) s += std::norm(z);
  return std::sqrt(s);
}

double PeriodicFunction::sobolev_norm(double s, bool homogeneous) const {
  double acc = 0.0;
  for (int k = -n_; k <= n_; ++k) {
    if (homogeneous && k == 0) continue;
    const double w = std::max(1.0, static_cast<double>(std::abs(k)));
    acc += std::pow(w, 2.0 * s) * std::norm(c_[k + n_]);
  }
  return std::sqrt(acc);
}

PeriodicFunction PeriodicFunction::derivative() const {
  PeriodicFunction f = *this;
  for (int k = -n_; k <= n_; ++k) f.c_[k + n_] *= cplx(0.0, k);
  if (parity_ == Parity::even) f.parity_ = Parity::odd;
  else if (parity_ == Parity::odd) f.parity_ = Parity::even;
  return f;
}

PeriodicFunction PeriodicFunction::resized(int N) const {
  PeriodicFunction f(N, parity_);
  f.complex_ = complex_;
  for (int k = -std::min(N, n_); k <= std::min(N, n_); ++k) f.c_[k + N] = c_[k + n_];
  return f;
}

PeriodicFunction PeriodicFunction::projected(Parity parity) const {
  PeriodicFunction f = *this;
  f.parity_ = parity;
  if (parity == Parity::none) return f;
  for (int k = 1; k <= n_; ++k) {
    const cplx a = c_[n_ + k];
    const cplx b = c_[n_ - k];
    const cplx sym = parity == Parity::even ? 0.5 * (a + b) : 0.5 * (a - b);
    f.c_[n_ + k] = sym;
    f.c_[n_ - k] = parity == Parity::even ? sym : -sym;
  }
  if (parity == Parity::odd) f.c_[n_] = 0.0;
  return f;
}

void PeriodicFunction::validate(double tol) const {
  double scale = 0.0;
  for (const auto& z : c_) scale = std::max(scale, std::abs(z));
  scale = std::max(scale, 1e-300);
  if (!complex_ && reality_defect() > 1e-14 * std::max(1.0, scale) + 1e-300) {
    throw InvalidArgument("periodic function is flagged real but c(-k) != conj(c(k))");
  }
  if (parity_defect(parity_) > tol * std::max(1.0, scale)) {
    throw InvalidArgument("periodic function violates its parity tag");
  }
  for (const auto& z : c_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument("non-finite Fourier coefficient");
    }
  }
}

namespace {

PeriodicFunction combine(const PeriodicFunction& a, const PeriodicFunction& b, double sb) {
  const int n = std::max(a.truncation(), b.truncation());
  const Parity p = a.parity() == b.parity() ? a.parity() : Parity::none;
  std::vector<cplx> c(2 * n + 1);
  for (int k = -n; k <= n; ++k) c[k + n] = a.coeff(k) + sb * b.coeff(k);
  return PeriodicFunction::from_coefficients(std::move(c), p,
                                             a.complex_valued() || b.complex_valued());
}

}  // namespace

PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b) {
  return combine(a, b, 1.0);
}

PeriodicFunction operator-(const PeriodicFunction& a, const PeriodicFunction& b) {
  return combine(a, b, -1.0);
}

PeriodicFunction operator*(double s, const PeriodicFunction& a) {
  PeriodicFunction f = a;
  for (auto& z : f.coefficients()) z *= s;
  return f;
}

double max_coeff_diff(const PeriodicFunction& a, const PeriodicFunction& b) {
  const int n = std::max(a.truncation(), b.truncation());
  double d = 0.0;
  for (int k = -n; k <= n; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
  return d;
}

}  // namespace stokes_spectra
