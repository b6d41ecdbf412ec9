#pragma once

#include "widthlab/measure.hpp"

#include <utility>
#include <vector>

namespace widthlab {

/// Stopping-time partition P_t: the positive-mass cubes Q with J(Q) < t whose
/// ancestors all have J >= t, where J(Q) = nu(Q) 2^{-level rho}.
struct PartitionResult {
  double t = 0;
  double rho = 0;
  std::vector<CubeMass> cells;  // canonical order
  std::size_t card = 0;
  double max_j = 0;
  unsigned min_level = 0;
  unsigned max_level = 0;
  /// J(root) < t: the partition is the root alone.
  bool degenerate = false;
};

/// Comparison J(Q) >= t is done in log2 with a 1e-12 slack, so a threshold
/// met with dyadic equality counts as met.
PartitionResult build_partition(const MeasureModel& model, double rho, double t, const ComputeLimits& limits = {});

struct EntropyFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> ts;                 // thresholds used in the fit
  std::vector<std::size_t> cards;         // matching card(P_t)
  std::vector<double> excluded;           // degenerate thresholds
};

/// Least-squares slope of log card(P_t) against -log t. Needs at least three
/// non-degenerate thresholds spanning at least three decades.
EntropyFit entropy_slope(const MeasureModel& model, double rho, const std::vector<double>& ts,
                         const ComputeLimits& limits = {});

/// Ordinary least squares y = a + b x; returns {b, a}.
std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace widthlab
