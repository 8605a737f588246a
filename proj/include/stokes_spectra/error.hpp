#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace stokes_spectra {

/// Bad input: violated precondition, malformed config, unknown key.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation ran but did not produce a trustworthy answer
/// (non-convergence, divergence alarm, singular system). Carries the
/// offending parameters so reports can echo them.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::map<std::string, double> context = {})
      : std::runtime_error(what), context_(std::move(context)) {}

  const std::map<std::string, double>& context() const noexcept { return context_; }

 private:
  std::map<std::string, double> context_;
};

}  // namespace stokes_spectra
