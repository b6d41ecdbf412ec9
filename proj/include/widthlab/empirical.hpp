#pragma once

// Piecewise-polynomial approximation over dyadic partitions, L^q(nu) error
// measurement, Sobolev seminorms of smooth test functions, and the
// bump-function packing probe.

#include "widthlab/coarse.hpp"
#include "widthlab/measure.hpp"
#include "widthlab/orders.hpp"
#include "widthlab/partition.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace widthlab {

// ---------------------------------------------------------------------------
// Quadrature

/// Gauss-Legendre rule with `order` nodes on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(unsigned order);

// ---------------------------------------------------------------------------
// Test functions

struct TestFunction {
  std::string name;
  unsigned dim = 1;
  std::function<double(std::span<const double>)> value;
  /// D^k u(x) for a multi-index k; empty when no analytic derivatives exist.
  std::function<double(std::span<const double>, std::span<const unsigned>)> partial;
  /// Highest total derivative order `partial` supports.
  unsigned max_derivative = 0;
  /// Smallest length on which the function changes shape; quadrature grids
  /// coarser than this are rejected.
  double feature_scale = 1.0;
  /// Set for polynomials.
  std::optional<unsigned> degree;

  double operator()(std::span<const double> x) const { return value(x); }
};

/// Builtin catalog: "const", "x" (first coordinate), "x2", "sin" (product of
/// sin(2 pi x_i)), "bump" (the mollified indicator below).
TestFunction make_test_function(std::string_view name, unsigned dim);
std::vector<std::string> catalog_names();

/// Tensor product of u1 = psi_eps * 1_[1/4,3/4] with eps = 1/12, psi the
/// standard C^inf mollifier on (-1,1). Supported in [1/6,5/6]^m, equal to 1 on
/// [1/3,2/3]^m, values in [0,1]. Analytic derivatives up to order 4.
TestFunction mollifier_bump(unsigned dim);

/// u(phi^{-1}(x)) with phi(y) = lower + side * y.
TestFunction rescaled(const TestFunction& u, std::vector<double> lower, double side);

/// sum_k c_k ((x - origin)/scale)^k over the given multi-indices.
TestFunction polynomial_function(unsigned dim, std::vector<std::vector<unsigned>> exponents,
                                 std::vector<double> coeffs, std::vector<double> origin = {}, double scale = 1.0);

/// Central-difference D^k u(x) with step h along every differentiated axis.
double partial_by_differences(const TestFunction& u, std::span<const double> x, std::span<const unsigned> k, double h);

// ---------------------------------------------------------------------------
// Moment-matching projection

/// Multi-indices with |k| <= degree, graded by total degree, then by
/// decreasing lexicographic order; there are C(m+degree, m) of them.
std::vector<std::vector<unsigned>> monomial_exponents(unsigned dim, unsigned degree);

struct CellProjection {
  /// Coefficients of r(y) = sum_k c_k y^k in the cell-local coordinates
  /// y = (x - corner) 2^level in (0,1]^m.
  std::vector<double> coeffs;
  /// 2-norm condition number of the local Gram matrix.
  double condition = 1;
};

/// The polynomial of degree <= `degree` with the same Lebesgue moments on the
/// cube as f (its L^2(cube) projection).
CellProjection moment_project(const TestFunction& f, const DyadicCube& cube, unsigned degree);

double evaluate_monomials(const std::vector<std::vector<unsigned>>& exponents, std::span<const double> coeffs,
                          std::span<const double> y);

class PiecewisePolynomial {
 public:
  PiecewisePolynomial(unsigned dim, unsigned degree, std::vector<DyadicCube> cells,
                      std::vector<std::vector<double>> coeffs, double max_condition = 1);

  unsigned dim() const { return dim_; }
  unsigned degree() const { return degree_; }
  const std::vector<DyadicCube>& cells() const { return cells_; }
  const std::vector<double>& coeffs(std::size_t cell) const { return coeffs_[cell]; }
  const std::vector<std::vector<unsigned>>& exponents() const { return exponents_; }
  unsigned max_level() const { return max_level_; }
  double max_condition() const { return max_condition_; }

  /// Index of the cell containing x (half-open), if any.
  std::optional<std::size_t> locate(std::span<const double> x) const;
  /// DomainError when no cell contains x.
  double operator()(std::span<const double> x) const;

 private:
  unsigned dim_;
  unsigned degree_;
  std::vector<DyadicCube> cells_;
  std::vector<std::vector<double>> coeffs_;
  std::vector<std::vector<unsigned>> exponents_;
  std::vector<unsigned> levels_;
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> lookup_;
  unsigned max_level_ = 0;
  double max_condition_ = 1;
};

PiecewisePolynomial piecewise_project(const TestFunction& f, const std::vector<DyadicCube>& cells, unsigned degree,
                                      unsigned threads = 1);
PiecewisePolynomial piecewise_project(const TestFunction& f, const PartitionResult& partition, unsigned degree,
                                      unsigned threads = 1);

// ---------------------------------------------------------------------------
// Errors and decay rates

struct LqError {
  double value = 0;
  unsigned depth = 0;
  std::size_t cubes = 0;  // positive-mass quadrature cubes
};

/// ||f - approx||_{L^q(nu)} with the rule: level-`depth` cube masses times the
/// integrand at cube centres (max over positive-mass cubes when q = inf).
/// Needs depth >= approx.max_level() + 2.
LqError lq_error(const TestFunction& f, const PiecewisePolynomial& approx, const MeasureModel& model,
                 const ExtendedReal& q, unsigned depth, const ComputeLimits& limits = {});

struct DecayRow {
  double t = 0;
  std::size_t card = 0;
  unsigned max_level = 0;
  double error = 0;
  double logcard = 0;
  double logerror = 0;
};

struct DecayOptions {
  unsigned extra_depth = 4;  // quadrature depth above the finest cell
  double tolerance = 0.15;
  unsigned fallback_level = 10;  // empirical spectrum level when no closed form exists
  ComputeLimits limits;
};

struct DecayResult {
  std::string function;
  std::vector<DecayRow> rows;
  double slope = 0;  // NaN when degenerate
  double predicted = 0;
  double tolerance = 0;
  bool degenerate = false;
  bool pass = false;  // slope <= predicted + tolerance
};

/// For every threshold: P_t for rho = q rho_hat, projection of degree sigma-1,
/// L^q(nu) error; slope of log error against log card(P_t), compared with the
/// upper Kolmogorov order.
DecayResult decay_experiment(const TestFunction& f, const MeasureModel& model, const EmbeddingParams& params,
                             const std::vector<double>& ts, const DecayOptions& options = {});

// ---------------------------------------------------------------------------
// Sobolev seminorms

/// (sum_{|k| = sigma} (D^k u(x))^2)^{1/2}
double gradient_magnitude(const TestFunction& u, std::span<const double> x, unsigned sigma);

/// (int |grad_sigma u|^p)^{1/p} over the box lower + [0, side]^m, with 2^resolution
/// cells per axis and Gauss-Legendre order max(2 sigma, 8) per cell; p = inf
/// takes the maximum over the nodes.
double sobolev_seminorm_on(const TestFunction& u, const std::vector<double>& lower, double side, unsigned sigma,
                           const ExtendedReal& p, unsigned resolution);
double sobolev_seminorm(const TestFunction& u, unsigned sigma, const ExtendedReal& p, unsigned resolution);

struct ScalingCheck {
  double lhs = 0;  // ||u_Q||_{sigma,p} on Q
  double rhs = 0;  // Lambda(Q)^{-rho_hat/m} ||u||_{sigma,p}
  double ratio = 0;
};

/// u_Q = u o phi_Q^{-1}, phi_Q(y) = 2^-level y + corner(Q).
ScalingCheck scaling_check(const TestFunction& u, const DyadicCube& cube, unsigned sigma, const ExtendedReal& p,
                           unsigned resolution = 6);

// ---------------------------------------------------------------------------
// Packing probe

struct ProbeOptions {
  unsigned extra_depth = 4;
  unsigned resolution = 6;
  unsigned operator_trials = 8;
  std::uint64_t seed = 1;
  ComputeLimits limits;
};

struct ProbeResult {
  unsigned n = 0;
  double alpha = 0;
  std::size_t good_count = 0;  // card N_{rho,n}(alpha)
  std::vector<DyadicCube> family;
  bool supports_disjoint = false;
  double norm_q = 0;                // ||g||_{L^q(nu)}
  double norm_sobolev = 0;          // ||g||_{sigma,p}, quadrature
  double norm_sobolev_closed = 0;   // (3 2^-n)^{-rho_hat} ||u|| c^{1/p}
  double ratio = 0;                 // norm_q / norm_sobolev
  double normalized = 0;            // ratio * 2^{alpha n / q}
  double operator_bound = 0;        // 3^m
  double operator_max_ratio = 0;    // max ||Q_n f|| / ||f|| over trials
  double span_reproduction_error = 0;  // ||Q_n g - g|| / ||g|| for g in the span
  bool operator_ok = false;
};

/// Builds the well-separated family of alpha-good level-n cubes, the bump sum
/// g = sum u_Q (u_Q the bump rescaled to the 3-fold enlargement of Q) and
/// measures ||g||_{L^q(nu)} / ||g||_{sigma,p}. Also applies the averaging
/// operator f -> sum_Q (int f u_Q dnu / int u_Q^2 dnu) u_Q to g and to random
/// piecewise-constant f.
ProbeResult packing_probe(const MeasureModel& model, unsigned n, double alpha, const EmbeddingParams& params,
                          const ProbeOptions& options = {});

}  // namespace widthlab
