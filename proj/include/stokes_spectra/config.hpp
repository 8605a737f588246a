#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stokes_spectra/params.hpp"

namespace stokes_spectra {

enum class ConfigType { integer, unsigned_integer, real, depth, grid, choice, text };

/// Resolved run configuration: every key of the schema has a value, stored
/// in canonical text form (shortest round-trip decimals, grids expanded to
/// comma lists), so serialize() / parse() round-trips exactly.
///
/// Text format: one `key = value` per line, `#` starts a comment. Grids are
/// `a,b,c` or `start:stop:count` (count points, both ends included).
class RunConfig {
 public:
  RunConfig();

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  /// Validates and stores; throws InvalidArgument naming the key.
  void set(const std::string& key, const std::string& value);
  /// "key=value"
  void assign(const std::string& assignment);

  const std::string& get(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<double> grid(const std::string& key) const;
  Depth depth() const;
  PhysicalParams params() const;

  std::string serialize() const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  static std::vector<std::string> keys();
  static ConfigType type_of(const std::string& key);
  static const std::string& doc(const std::string& key);

  friend bool operator==(const RunConfig& a, const RunConfig& b) { return a.values_ == b.values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Shortest decimal that reads back to the same double.
std::string format_shortest(double x);
/// 17 significant digits, '.' separator, no locale.
std::string format_fixed17(double x);

}  // namespace stokes_spectra
