#include "lrfs/numerics.hpp"

#include <stdexcept>

namespace lrfs {

std::vector<std::uint32_t> systematic_resample(std::span<const double> weights,
                                               std::size_t n, double u0) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("resample: bad weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("resample: all weights zero");

  std::vector<std::uint32_t> out;
  out.reserve(n);
  const double step = total / static_cast<double>(n);
  double target = u0 * step;
  double cumulative = 0.0;
  std::uint32_t i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (cumulative + weights[i] <= target && i + 1 < weights.size()) {
      cumulative += weights[i];
      ++i;
    }
    out.push_back(i);
    target += step;
  }
  return out;
}

}  // namespace lrfs
