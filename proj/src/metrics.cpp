#include "vecrm/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace vecrm {

double jain_fairness(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("fairness: empty input");
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) throw std::invalid_argument("fairness: all values are zero");
  return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

std::size_t convergence_iteration(std::span<const double> objective_trace,
                                  double rel_tol) {
  const std::size_t n = objective_trace.size();
  if (n == 0) throw std::invalid_argument("convergence: empty trace");

  std::size_t window = n / 20;
  if (window == 0) window = 1;
  double mean = 0.0;
  for (std::size_t i = n - window; i < n; ++i) mean += objective_trace[i];
  mean /= static_cast<double>(window);

  const double band = rel_tol * std::abs(mean);
  // Walk backward to the last round that leaves the band.
  std::size_t first_stable = 0;
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(objective_trace[i] - mean) > band) {
      first_stable = i + 1;
      break;
    }
  }
  if (first_stable >= n) return n;  // even the final round sits outside
  return first_stable + 1;          // 1-based round index
}

}  // namespace vecrm
