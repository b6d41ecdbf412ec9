#pragma once

#include "widthlab/measure.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace widthlab {

/// beta_n(t) = log(sum_Q nu(Q)^t) / (n log 2) from a level-n mass distribution.
/// Evaluated with a log-sum-exp over the mass classes; t = 1 is summed exactly.
double beta_from_distribution(const LevelDistribution& dist, unsigned level, double t);

double beta_n(const MeasureModel& model, unsigned level, double t, const ComputeLimits& limits = {});

/// One distribution, many t values.
std::vector<double> beta_n_grid(const MeasureModel& model, unsigned level, const std::vector<double>& ts,
                                const ComputeLimits& limits = {});

/// 0, 0.01, ..., 1.5
std::vector<double> default_t_grid();

class SpectrumCurve {
 public:
  enum class Kind { ClosedForm, Empirical };

  static SpectrumCurve closed_form(std::function<double(double)> beta, std::string description);
  static SpectrumCurve empirical(unsigned level, std::vector<double> t_grid, std::vector<double> values);

  Kind kind() const { return kind_; }
  const std::string& description() const { return description_; }

  /// Closed form: any t >= 0. Empirical: linear interpolation inside the grid,
  /// DomainError outside it.
  double operator()(double t) const;

  unsigned level() const { return level_; }
  const std::vector<double>& t_grid() const { return t_grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  Kind kind_ = Kind::ClosedForm;
  std::string description_;
  std::function<double(double)> beta_;
  unsigned level_ = 0;
  std::vector<double> t_grid_;
  std::vector<double> values_;
};

/// log2(sum p_i^t)/k for a common-ratio IFS, m(1-t) for uniform measure,
/// (1-t)s for a declared Ahlfors-regular model, and sums of these for
/// products. Atomic models and mixed-ratio IFS have none.
std::optional<SpectrumCurve> closed_form_spectrum(const MeasureModel& model);

SpectrumCurve empirical_spectrum(const MeasureModel& model, unsigned level, const std::vector<double>& t_grid,
                                 const ComputeLimits& limits = {});

/// inf{t > 0 : beta(t) - b t <= 0}.
double s_b_solve(const SpectrumCurve& curve, double b);

struct DimensionEstimate {
  std::vector<unsigned> levels;
  std::vector<double> values;  // log2(card D_n) / n
  double window_min = 0;
  double window_max = 0;
};

DimensionEstimate minkowski(const MeasureModel& model, unsigned first_level, unsigned last_level,
                            const ComputeLimits& limits = {});

/// Pairwise (cascade) summation; the result does not depend on thread layout.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace widthlab
