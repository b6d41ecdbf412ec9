#pragma once

#include "widthlab/measure.hpp"

#include <cstdint>
#include <vector>

namespace widthlab {

/// log2 of nu(Q) Lambda(Q)^{rho/m} = log2 nu(Q) - level * rho; -inf when nu(Q) = 0.
double log2_j_value(const Rational& mass, unsigned level, double rho);
double log2_j_value(const MeasureModel& model, const DyadicCube& cube, double rho);
double j_value(const MeasureModel& model, const DyadicCube& cube, double rho);

/// Whether J(Q) >= 2^-{alpha n}, with a 1e-12 slack in log2 so that exact
/// dyadic equality counts as met.
bool alpha_good(const Rational& mass, unsigned level, double rho, double alpha);

std::uint64_t count_from_distribution(const LevelDistribution& dist, unsigned level, double rho, double alpha);
std::uint64_t count_N(const MeasureModel& model, unsigned level, double rho, double alpha,
                      const ComputeLimits& limits = {});

/// The alpha-good cubes themselves, in canonical order.
std::vector<CubeMass> good_cubes(const MeasureModel& model, unsigned level, double rho, double alpha,
                                 const ComputeLimits& limits = {});

struct CoarseProfile {
  double rho = 0;
  std::vector<unsigned> levels;
  std::vector<double> alpha_grid;
  std::vector<std::vector<std::uint64_t>> counts;  // [level][alpha]
  std::vector<std::uint64_t> cards;                // card D_n per level
  std::vector<double> F_upper;                     // per alpha; -inf if every level counts 0
  std::vector<double> F_lower;                     // per alpha; -inf if some level counts 0
  double optimized_upper = 0;
  double optimized_lower = 0;
  double alpha_at_upper = 0;
  double alpha_at_lower = 0;

  /// Finite-level stand-in for s_rho (the upper optimized dimension).
  double s_target() const { return optimized_upper; }
  bool regular(double tol = 0.05) const;
};

/// 0.1, 0.15, ..., m + rho + 2
std::vector<double> default_alpha_grid(unsigned m, double rho);

CoarseProfile coarse_profile(const MeasureModel& model, const std::vector<unsigned>& levels, double rho,
                             const std::vector<double>& alpha_grid, const ComputeLimits& limits = {});

/// Greedy well-separated subfamily of same-level cubes. Cubes are visited by
/// decreasing mass (ties by index); a visited survivor whose 5-fold enlargement
/// still meets another survivor is kept and every survivor within Chebyshev
/// index distance 2 of it is discarded. The survivors have pairwise disjoint
/// 3-fold enlargements and number at least floor(card / 5^m).
std::vector<CubeMass> well_separated(const std::vector<CubeMass>& cubes);
std::vector<DyadicCube> well_separated(const std::vector<DyadicCube>& cubes, const MeasureModel& model);

/// sup of masses outside `cubes` <= inf of masses inside (checked against D_n).
bool threshold_property_holds(const MeasureModel& model, const std::vector<CubeMass>& cubes,
                              const ComputeLimits& limits = {});

/// nu(Q) >= nu(Q') for every same-level neighbour Q' of Q.
bool dominates_neighbors(const MeasureModel& model, const DyadicCube& cube);

}  // namespace widthlab
