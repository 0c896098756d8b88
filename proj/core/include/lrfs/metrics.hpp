#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace lrfs {

struct OspaParams {
  double cutoff = 50.0;  // c (m)
  double order = 1.0;    // p >= 1
};

// Minimum-cost perfect assignment on a square cost matrix (shortest
// augmenting path, O(n^3)). Optionally reports the column assigned to each
// row.
double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col = nullptr);

// Optimal subpattern assignment distance between finite 2-D position sets.
// Always in [0, cutoff]; 0 when both sets are empty.
double ospa(std::span<const Eigen::Vector2d> est, std::span<const Eigen::Vector2d> truth,
            const OspaParams& params);

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> se;  // standard error of the mean (0 for a single trial)
};

// Pointwise mean and standard error across equal-length per-trial series.
SeriesStats mc_aggregate(const std::vector<std::vector<double>>& per_trial);

}  // namespace lrfs
