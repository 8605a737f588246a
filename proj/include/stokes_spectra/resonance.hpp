#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stokes_spectra/params.hpp"

namespace stokes_spectra {

struct ResonanceQuery {
  std::vector<int> signs;        // +-1, length N >= 2
  std::vector<int> wavevectors;  // nonzero, length N
  PhysicalParams params;
};

/// sum_k signs_k Omega(j_k), signed.
double small_divisor(const ResonanceQuery& query);

struct NWaveOptions {
  double threshold = 1e-6;          // on |divisor| max|j|^tau
  double budget = 5e7;              // max tuples enumerated
  std::size_t max_report = 1000;    // near-resonant entries kept (the first in order)
  int jobs = 0;
};

struct NWaveEntry {
  std::vector<int> wavevectors;
  double divisor = 0.0;  // signed
  double scaled = 0.0;   // |divisor| max|j|^tau
};

struct NWaveReport {
  int N = 0;
  int p = 0;
  int j_max = 0;
  double tau = 0.0;
  std::uint64_t enumerated = 0;
  std::uint64_t excluded = 0;
  double min_scaled = 0.0;      // over non-excluded tuples
  NWaveEntry argmin;
  std::vector<NWaveEntry> near;  // scaled < threshold, lexicographic
  bool truncated = false;       // more near entries than max_report
};

/// Signs are + on the first p entries and - on the rest. Tuples are taken
/// up to reordering inside each sign group (nondecreasing j), in
/// lexicographic order. Tuples with equal multisets {|j_1..j_p|} and
/// {|j_p+1..j_N|} are skipped. Throws InvalidArgument when the tuple count
/// exceeds the budget.
NWaveReport scan_nwave(int N, int p, int j_max, double tau, const PhysicalParams& params,
                       const NWaveOptions& options = {});

struct MelnikovBudget {
  double upsilon = 0.0;  // > 0
  double tau = 0.0;
  double d = 0.0;        // >= 0
};

/// j == 0: |omega.l| >= upsilon |l|^-tau (l != 0).
/// j >= 1, no j': |omega.l + mu_j| >= upsilon j^(1/2) <l>^-tau.
/// j, j' >= 1: |omega.l + mu_j - mu_j'| >= upsilon j^-d j'^-d <l>^-tau, (l, j, j') != (0, j, j).
/// |l| is the sup norm and <l> = max(1, |l|).
bool check_melnikov(const std::vector<double>& omega, const std::vector<int>& ell, int j,
                    std::optional<int> j_prime, double mu_j, std::optional<double> mu_jp,
                    const MelnikovBudget& budget);

/// Surface tension kappa in [lo, hi] where small_divisor vanishes (the
/// query's own kappa is ignored). Bracketed root by TOMS 748.
double resonant_tension(const ResonanceQuery& query, double lo, double hi);

struct WiltonPoint {
  int M = 0;           // Omega(M) = M Omega(1)
  double kappa = 0.0;
};

/// Wilton ripple tensions for M = 2..m_max at the given depth, gravity and
/// vorticity, searched on kappa in (0, 10].
std::vector<WiltonPoint> wilton_tensions(int m_max, const PhysicalParams& params);

}  // namespace stokes_spectra
