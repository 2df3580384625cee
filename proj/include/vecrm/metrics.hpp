#pragma once

#include <cstddef>
#include <span>

namespace vecrm {

// (sum u)^2 / (n * sum u^2): 1 for equal shares, 1/n for a single nonzero
// entry. Inputs are magnitudes; throws std::invalid_argument when empty or
// all zero.
double jain_fairness(std::span<const double> values);

// First 1-based round after which the trace stays within rel_tol of the mean
// over its final 5% window (at least one round). Returns the trace length when
// the trace never settles; throws std::invalid_argument on an empty trace.
std::size_t convergence_iteration(std::span<const double> objective_trace,
                                  double rel_tol = 0.01);

}  // namespace vecrm
