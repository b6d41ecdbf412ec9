#include "widthlab/spectrum.hpp"

#include "widthlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace widthlab {

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

namespace {

// log(sum_i exp(terms_i)) with the largest term factored out.
double log_sum_exp(const std::vector<double>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : terms) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  std::vector<double> scaled(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) scaled[i] = std::exp(terms[i] - top);
  return top + std::log(pairwise_sum(scaled.data(), scaled.size()));
}

}  // namespace

double beta_from_distribution(const LevelDistribution& dist, unsigned level, double t) {
  if (level == 0) throw DomainError("beta_n needs level n >= 1");
  if (!(t >= 0)) throw DomainError("beta_n needs t >= 0");
  if (dist.empty()) throw DomainError("empty mass distribution");
  const double denom = static_cast<double>(level) * std::numbers::ln2;
  // t = 0 and t = 1 are exact: log2 of the cube count and of the total mass
  if (t == 0.0 || t == 1.0) {
    Rational total = 0;
    for (const auto& c : dist) {
      const Rational count(mpz_class(std::to_string(c.count)));
      total += t == 0.0 ? count : c.mass * count;
    }
    return log2_of(total) / level;
  }
  std::vector<double> terms;
  terms.reserve(dist.size());
  for (const auto& c : dist) {
    terms.push_back(std::log(static_cast<double>(c.count)) + t * log2_of(c.mass) * std::numbers::ln2);
  }
  return log_sum_exp(terms) / denom;
}

double beta_n(const MeasureModel& model, unsigned level, double t, const ComputeLimits& limits) {
  return beta_from_distribution(level_distribution(model, level, limits), level, t);
}

std::vector<double> beta_n_grid(const MeasureModel& model, unsigned level, const std::vector<double>& ts,
                                const ComputeLimits& limits) {
  const auto dist = level_distribution(model, level, limits);
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(beta_from_distribution(dist, level, t));
  return out;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 150; ++i) g.push_back(i / 100.0);
  return g;
}

SpectrumCurve SpectrumCurve::closed_form(std::function<double(double)> beta, std::string description) {
  SpectrumCurve c;
  c.kind_ = Kind::ClosedForm;
  c.beta_ = std::move(beta);
  c.description_ = std::move(description);
  return c;
}

SpectrumCurve SpectrumCurve::empirical(unsigned level, std::vector<double> t_grid, std::vector<double> values) {
  if (t_grid.empty() || t_grid.size() != values.size()) throw DomainError("empirical spectrum needs matching grids");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("t grid must be increasing");
  }
  if (t_grid.front() < 0) throw DomainError("t grid must be nonnegative");
  SpectrumCurve c;
  c.kind_ = Kind::Empirical;
  c.level_ = level;
  c.t_grid_ = std::move(t_grid);
  c.values_ = std::move(values);
  c.description_ = "empirical level " + std::to_string(level);
  return c;
}

double SpectrumCurve::operator()(double t) const {
  if (kind_ == Kind::ClosedForm) {
    if (!(t >= 0)) throw DomainError("spectrum evaluated at negative t");
    return beta_(t);
  }
  if (t < t_grid_.front() || t > t_grid_.back()) throw DomainError("t outside the empirical grid");
  auto it = std::lower_bound(t_grid_.begin(), t_grid_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_grid_.begin());
  if (t_grid_[i] == t) return values_[i];
  const double w = (t - t_grid_[i - 1]) / (t_grid_[i] - t_grid_[i - 1]);
  return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

namespace {

double ifs_beta(const std::vector<double>& log_p, unsigned k, double t) {
  if (t == 1.0) return 0.0;  // probabilities sum to one exactly
  std::vector<double> terms;
  for (double lp : log_p) terms.push_back(t * lp);
  return log_sum_exp(terms) / (std::numbers::ln2 * k);
}

std::optional<std::function<double(double)>> closed_form_function(const MeasureModel& model, std::string& what) {
  if (const auto* f = model.as<IfsModel>(); f && f->common_ratio()) {
    std::vector<double> log_p;
    for (const auto& p : f->probs) log_p.push_back(log2_of(p) * std::numbers::ln2);
    const unsigned k = f->maps.front().ratio_log2;
    what = "log2(sum p_i^t)/" + std::to_string(k);
    return [log_p, k](double t) { return ifs_beta(log_p, k, t); };
  }
  if (model.as<UniformModel>()) {
    const double m = model.dim();
    what = std::to_string(model.dim()) + "(1-t)";
    return [m](double t) { return m * (1.0 - t); };
  }
  if (model.ahlfors()) {
    const double s = to_double(*model.ahlfors());
    what = "(1-t)" + to_string(*model.ahlfors());
    return [s](double t) { return s * (1.0 - t); };
  }
  if (const auto* p = model.as<ProductModel>()) {
    std::vector<std::function<double(double)>> parts;
    what.clear();
    for (const auto& factor : p->factors) {
      std::string sub;
      auto g = closed_form_function(*factor, sub);
      if (!g) return std::nullopt;
      parts.push_back(*g);
      what += (what.empty() ? "" : " + ") + sub;
    }
    return [parts](double t) {
      double s = 0;
      for (const auto& g : parts) s += g(t);
      return s;
    };
  }
  return std::nullopt;
}

}  // namespace

std::optional<SpectrumCurve> closed_form_spectrum(const MeasureModel& model) {
  std::string what;
  auto f = closed_form_function(model, what);
  if (!f) return std::nullopt;
  return SpectrumCurve::closed_form(std::move(*f), what);
}

SpectrumCurve empirical_spectrum(const MeasureModel& model, unsigned level, const std::vector<double>& t_grid,
                                 const ComputeLimits& limits) {
  return SpectrumCurve::empirical(level, t_grid, beta_n_grid(model, level, t_grid, limits));
}

double s_b_solve(const SpectrumCurve& curve, double b) {
  if (!(b > 0)) throw DomainError("s_b needs b > 0");
  auto f = [&](double t) { return curve(t) - b * t; };

  if (curve.kind() == SpectrumCurve::Kind::Empirical) {
    const auto& ts = curve.t_grid();
    const auto& vs = curve.values();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double fi = vs[i] - b * ts[i];
      if (fi > 0) continue;
      if (i == 0) {
        if (ts[0] == 0) return 0.0;
        throw DomainError("s_b lies below the empirical t grid");
      }
      const double fp = vs[i - 1] - b * ts[i - 1];
      return ts[i - 1] + (ts[i] - ts[i - 1]) * fp / (fp - fi);
    }
    throw DomainError("s_b lies above the empirical t grid");
  }

  if (f(0.0) <= 0) return 0.0;
  double hi = 1.5;
  while (f(hi) > 0) {
    hi *= 2;
    if (hi > 64) throw DomainError("no crossing of beta(t) = b t below t = 64");
  }
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return hi;
}

DimensionEstimate minkowski(const MeasureModel& model, unsigned first_level, unsigned last_level,
                            const ComputeLimits& limits) {
  if (first_level == 0) throw DomainError("box dimension needs levels n >= 1");
  if (first_level > last_level) throw DomainError("empty level range");
  DimensionEstimate est;
  for (unsigned n = first_level; n <= last_level; ++n) {
    const auto card = cardinality(level_distribution(model, n, limits));
    est.levels.push_back(n);
    est.values.push_back(std::log2(static_cast<double>(card)) / n);
  }
  est.window_min = *std::min_element(est.values.begin(), est.values.end());
  est.window_max = *std::max_element(est.values.begin(), est.values.end());
  return est;
}

}  // namespace widthlab
