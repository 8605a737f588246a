#include "stokes_spectra/params.hpp"

#include <charconv>
#include <cmath>

#include "stokes_spectra/dispersion.hpp"
#include "stokes_spectra/error.hpp"

namespace stokes_spectra {

Depth Depth::finite(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("depth must be positive and finite (use Depth::infinite())");
  }
  Depth d;
  d.infinite_ = false;
  d.h_ = h;
  return d;
}

std::string Depth::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), h_);
  return std::string(buf, res.ptr);
}

Depth Depth::parse(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "Infinite" || text == "Inf") {
    return infinite();
  }
  double h = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), h);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("cannot parse depth '" + text + "'");
  }
  if (std::isinf(h)) return infinite();
  return finite(h);
}

void PhysicalParams::validate() const {
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw InvalidArgument("gravity must be positive");
  }
  if (!(surface_tension >= 0.0) || !std::isfinite(surface_tension)) {
    throw InvalidArgument("surface tension must be nonnegative");
  }
  if (!std::isfinite(vorticity)) throw InvalidArgument("vorticity must be finite");
}

double PhysicalParams::c_h() const {
  return depth.is_infinite() ? 1.0 : std::sqrt(stable_tanh(depth.value()));
}

double PhysicalParams::linear_speed() const { return omega_j(1, *this); }

}  // namespace stokes_spectra
