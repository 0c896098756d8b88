#include "lrfs/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrfs {

double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("solve_assignment: matrix not square");
  if (n == 0) {
    if (row_to_col) row_to_col->clear();
    return 0.0;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> matched(n + 1, 0), way(n + 1, 0);  // matched[j]: row in column j

  for (int i = 1; i <= n; ++i) {
    matched[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = matched[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[matched[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched[j0] != 0);
    do {
      const int j1 = way[j0];
      matched[j0] = matched[j1];
      j0 = j1;
    } while (j0);
  }

  double total = 0.0;
  if (row_to_col) row_to_col->assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    total += cost(matched[j] - 1, j - 1);
    if (row_to_col) (*row_to_col)[matched[j] - 1] = j - 1;
  }
  return total;
}

double ospa(std::span<const Eigen::Vector2d> est, std::span<const Eigen::Vector2d> truth,
            const OspaParams& params) {
  if (params.cutoff <= 0.0 || params.order < 1.0)
    throw std::invalid_argument("ospa: need cutoff > 0 and order >= 1");
  const auto& small = est.size() <= truth.size() ? est : truth;
  const auto& large = est.size() <= truth.size() ? truth : est;
  const std::size_t m = small.size(), n = large.size();
  if (n == 0) return 0.0;
  const double c_p = std::pow(params.cutoff, params.order);
  if (m == 0) return params.cutoff;

  // pad the smaller set with zero-cost rows; unmatched points are charged
  // the cardinality penalty separately
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(
          std::min((small[i] - large[j]).norm(), params.cutoff), params.order);

  const double matched = solve_assignment(cost);
  const double total = matched + c_p * static_cast<double>(n - m);
  return std::pow(total / static_cast<double>(n), 1.0 / params.order);
}

SeriesStats mc_aggregate(const std::vector<std::vector<double>>& per_trial) {
  if (per_trial.empty()) throw std::invalid_argument("mc_aggregate: no trials");
  const std::size_t steps = per_trial.front().size();
  for (const auto& t : per_trial)
    if (t.size() != steps) throw std::invalid_argument("mc_aggregate: unequal series lengths");
  const double trials = static_cast<double>(per_trial.size());

  SeriesStats out;
  out.mean.assign(steps, 0.0);
  out.se.assign(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    double mean = 0.0;
    for (const auto& series : per_trial) mean += series[t];
    mean /= trials;
    out.mean[t] = mean;
    if (per_trial.size() > 1) {
      double var = 0.0;
      for (const auto& series : per_trial) {
        const double d = series[t] - mean;
        var += d * d;
      }
      var /= trials - 1.0;
      out.se[t] = std::sqrt(var / trials);
    }
  }
  return out;
}

}  // namespace lrfs
