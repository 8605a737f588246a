#pragma once

// Internal Fourier machinery shared by the DN operator, the traveling-wave
// residual and the integrator. Fields are stored as truncated series
// e^{i mu x} sum_{|k|<=K} c_k e^{ikx}; products go through an FFT grid.

#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

namespace stokes_spectra::detail {

using cplx = std::complex<double>;

int next_pow2(int n);

/// Grid size with 2x padding for a K-mode product.
inline int grid_size(int K) { return next_pow2(4 * K + 4); }

/// out_j = sum_k in_k exp(+2 pi i j k / n)
void fft_backward(const cplx* in, cplx* out, int n);
/// out_k = sum_j in_j exp(-2 pi i j k / n)
void fft_forward(const cplx* in, cplx* out, int n);

/// Forward-mode pair (value, directional derivative).
struct Dual {
  cplx v{};
  cplx d{};
  Dual() = default;
  Dual(double x) : v(x) {}
  Dual(cplx x) : v(x) {}
  Dual(cplx x, cplx dx) : v(x), d(dx) {}
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Dual operator/(const Dual& a, const Dual& b) {
  const cplx q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
inline Dual operator*(double s, const Dual& a) { return {s * a.v, s * a.d}; }
inline Dual operator*(cplx s, const Dual& a) { return {s * a.v, s * a.d}; }
inline Dual& operator+=(Dual& a, const Dual& b) { a.v += b.v; a.d += b.d; return a; }
inline Dual& operator-=(Dual& a, const Dual& b) { a.v -= b.v; a.d -= b.d; return a; }
inline Dual& operator*=(Dual& a, double s) { a.v *= s; a.d *= s; return a; }
inline Dual sqrt(const Dual& a) {
  const cplx r = std::sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}

inline cplx value_of(const cplx& z) { return z; }
inline cplx value_of(const Dual& z) { return z.v; }

template <class T>
struct Series {
  int K = 0;
  double mu = 0.0;
  std::vector<T> c;
  Series() = default;
  Series(int K_, double mu_) : K(K_), mu(mu_), c(2 * K_ + 1, T{}) {}
  T& at(int k) { return c[k + K]; }
  const T& at(int k) const { return c[k + K]; }
};

template <class T>
struct Samples {
  int n = 0;
  double mu = 0.0;
  std::vector<T> v;
  Samples() = default;
  Samples(int n_, double mu_) : n(n_), mu(mu_), v(n_, T{}) {}
};

/// Bloch exponent of a product. Complex fields add their shifts; for dual
/// fields the value part is always periodic and the shift lives on the
/// derivative part, so it is shared.
template <class T>
double product_mu(double a, double b) {
  if constexpr (std::is_same_v<T, Dual>) {
    return a != 0.0 ? a : b;
  } else {
    return a + b;
  }
}

Samples<cplx> to_grid(const Series<cplx>& s, int n);
Series<cplx> to_series(const Samples<cplx>& g, int K);

inline Samples<Dual> to_grid(const Series<Dual>& s, int n) {
  Series<cplx> a(s.K, 0.0), b(s.K, s.mu);
  for (size_t i = 0; i < s.c.size(); ++i) {
    a.c[i] = s.c[i].v;
    b.c[i] = s.c[i].d;
  }
  auto ga = to_grid(a, n);
  auto gb = to_grid(b, n);
  Samples<Dual> out(n, s.mu);
  for (int i = 0; i < n; ++i) out.v[i] = Dual(ga.v[i], gb.v[i]);
  return out;
}

inline Series<Dual> to_series(const Samples<Dual>& g, int K) {
  Samples<cplx> a(g.n, 0.0), b(g.n, g.mu);
  for (int i = 0; i < g.n; ++i) {
    a.v[i] = g.v[i].v;
    b.v[i] = g.v[i].d;
  }
  auto sa = to_series(a, K);
  auto sb = to_series(b, K);
  Series<Dual> out(K, g.mu);
  for (size_t i = 0; i < out.c.size(); ++i) out.c[i] = Dual(sa.c[i], sb.c[i]);
  return out;
}

/// Multiplies mode k by f(k + mu). For dual series the value part uses
/// f(k) and the derivative part f(k + mu).
template <class T, class F>
Series<T> apply_symbol(const Series<T>& s, F f) {
  Series<T> out = s;
  for (int k = -s.K; k <= s.K; ++k) {
    if constexpr (std::is_same_v<T, Dual>) {
      auto& z = out.at(k);
      z.v *= f(static_cast<double>(k));
      z.d *= f(k + s.mu);
    } else {
      out.at(k) *= f(k + s.mu);
    }
  }
  return out;
}

template <class T>
Series<T> add(const Series<T>& a, const Series<T>& b, double sb = 1.0) {
  Series<T> out = a;
  if (out.mu == 0.0) out.mu = b.mu;
  for (size_t i = 0; i < out.c.size(); ++i) out.c[i] += sb * b.c[i];
  return out;
}

template <class T>
Series<T> scale(const Series<T>& a, double s) {
  Series<T> out = a;
  for (auto& z : out.c) z *= s;
  return out;
}

template <class T>
Samples<T> mul(const Samples<T>& a, const Samples<T>& b) {
  Samples<T> out(a.n, product_mu<T>(a.mu, b.mu));
  for (int i = 0; i < a.n; ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

template <class T>
Samples<T> add(const Samples<T>& a, const Samples<T>& b, double sb = 1.0) {
  Samples<T> out(a.n, a.mu != 0.0 ? a.mu : b.mu);
  for (int i = 0; i < a.n; ++i) out.v[i] = a.v[i] + sb * b.v[i];
  return out;
}

template <class T, class F>
Samples<T> map(const Samples<T>& a, F f) {
  Samples<T> out(a.n, a.mu);
  for (int i = 0; i < a.n; ++i) out.v[i] = f(a.v[i]);
  return out;
}

/// P_K of the product of two series.
template <class T>
Series<T> product(const Series<T>& a, const Series<T>& b, int n) {
  return to_series(mul(to_grid(a, n), to_grid(b, n)), a.K);
}

inline double norm_of(const Series<cplx>& s) {
  double acc = 0.0;
  for (const auto& z : s.c) acc += std::norm(z);
  return std::sqrt(acc);
}

inline double norm_of(const Series<Dual>& s) {
  double acc = 0.0;
  for (const auto& z : s.c) acc += std::norm(z.v);
  return std::sqrt(acc);
}

/// Resizes a series to K modes (zero padding or truncation).
template <class T>
Series<T> resize(const Series<T>& s, int K) {
  Series<T> out(K, s.mu);
  const int m = std::min(K, s.K);
  for (int k = -m; k <= m; ++k) out.at(k) = s.at(k);
  return out;
}

}  // namespace stokes_spectra::detail
