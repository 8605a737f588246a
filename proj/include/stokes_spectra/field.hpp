#pragma once

#include <complex>
#include <vector>

namespace stokes_spectra {

using cplx = std::complex<double>;

enum class Parity { none, even, odd };

/// Truncated Fourier series f(x) = sum_{|k|<=N} c_k e^{ikx}.
/// Real-valued unless flagged complex; a reality defect above 1e-14
/// (relative) is rejected by validate().
class PeriodicFunction {
 public:
  PeriodicFunction() = default;
  explicit PeriodicFunction(int N, Parity parity = Parity::none);

  /// Coefficients ordered k = -N..N.
  static PeriodicFunction from_coefficients(std::vector<cplx> coefficients,
                                            Parity parity = Parity::none,
                                            bool complex_valued = false);
  /// Samples on x_n = 2 pi n / n_samples, projected to |k| <= N.
  static PeriodicFunction from_samples(const std::vector<double>& values, int N);

  static PeriodicFunction constant(int N, double value);
  /// amplitude * cos(k x) / amplitude * sin(k x)
  static PeriodicFunction cosine(int N, double amplitude, int k = 1);
  static PeriodicFunction sine(int N, double amplitude, int k = 1);

  int truncation() const noexcept { return n_; }
  cplx coeff(int k) const noexcept;
  /// Sets c_k and, for real functions, c_{-k} = conj(c_k).
  void set_coeff(int k, cplx value);
  const std::vector<cplx>& coefficients() const noexcept { return c_; }
  std::vector<cplx>& coefficients() noexcept { return c_; }

  Parity parity() const noexcept { return parity_; }
  void set_parity(Parity p) noexcept { parity_ = p; }
  bool complex_valued() const noexcept { return complex_; }

  /// Cosine / sine coefficients: f = a_0 + sum a_k cos kx + b_k sin kx.
  double cos_coeff(int k) const;
  double sin_coeff(int k) const;

  double evaluate(double x) const;
  std::vector<double> samples(int n_samples) const;

  double mean() const noexcept { return coeff(0).real(); }
  double reality_defect() const;
  double parity_defect(Parity parity) const;
  /// Sup norm on a grid of max(64, 8N) points.
  double sup_norm() const;
  /// sqrt(sum |c_k|^2), the L^2 norm w.r.t. dx / 2pi.
  double l2_norm() const;
  /// sqrt(sum <k>^{2s} |c_k|^2) with <k> = max(1, |k|); the k = 0 mode is
  /// dropped when homogeneous is set.
  double sobolev_norm(double s, bool homogeneous = false) const;

  PeriodicFunction derivative() const;
  PeriodicFunction resized(int N) const;
  /// Removes the imaginary part of the parity-forbidden component.
  PeriodicFunction projected(Parity parity) const;

  /// Throws InvalidArgument on a broken reality or parity invariant.
  void validate(double tol = 1e-12) const;

 private:
  int n_ = 0;
  std::vector<cplx> c_{cplx(0.0)};
  Parity parity_ = Parity::none;
  bool complex_ = false;
};

PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b);
PeriodicFunction operator-(const PeriodicFunction& a, const PeriodicFunction& b);
PeriodicFunction operator*(double s, const PeriodicFunction& a);

/// Max coefficient difference after padding both to the larger truncation.
double max_coeff_diff(const PeriodicFunction& a, const PeriodicFunction& b);

}  // namespace stokes_spectra
