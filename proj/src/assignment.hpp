#pragma once

#include <Eigen/Dense>
#include <vector>

namespace stokes_spectra::detail {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// method, O(n^3)). Returns col[row].
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace stokes_spectra::detail
