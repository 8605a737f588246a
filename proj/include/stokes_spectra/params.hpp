#pragma once

#include <limits>
#include <string>

namespace stokes_spectra {

/// Fluid depth: either a positive finite value or the deep-water limit.
/// The deep-water case is a tag, not a large number, so that the symbol
/// |xi| is used exactly.
class Depth {
 public:
  static Depth infinite() { return Depth(); }
  static Depth finite(double h);

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite depth value; +inf for the deep-water tag.
  double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : h_;
  }

  /// "inf" or the shortest round-trip decimal.
  std::string to_string() const;
  static Depth parse(const std::string& text);

  friend bool operator==(const Depth& a, const Depth& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.h_ == b.h_);
  }

 private:
  Depth() = default;
  bool infinite_ = true;
  double h_ = 0.0;
};

struct PhysicalParams {
  double gravity = 1.0;
  double surface_tension = 0.0;  // kappa
  double vorticity = 0.0;        // gamma
  Depth depth = Depth::infinite();

  /// Throws InvalidArgument unless gravity > 0 and surface_tension >= 0.
  void validate() const;

  /// sqrt(tanh(h)); 1 in deep water.
  double c_h() const;

  /// Phase speed of the k = 1 linear wave, Omega(1). Equals c_h for g = 1,
  /// kappa = gamma = 0.
  double linear_speed() const;

  bool irrotational() const noexcept { return vorticity == 0.0; }
};

}  // namespace stokes_spectra
