#include "parallel.hpp"
#include "widthlab/empirical.hpp"
#include "widthlab/error.hpp"
#include "widthlab/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <set>

namespace widthlab {

std::vector<std::vector<unsigned>> monomial_exponents(unsigned dim, unsigned degree) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> k(dim, 0);
  for (unsigned total = 0; total <= degree; ++total) {
    // All k with |k| = total, first coordinate largest first.
    std::function<void(unsigned, unsigned)> rec = [&](unsigned axis, unsigned left) {
      if (axis + 1 == dim) {
        k[axis] = left;
        out.push_back(k);
        return;
      }
      for (unsigned v = left + 1; v-- > 0;) {
        k[axis] = v;
        rec(axis + 1, left - v);
      }
    };
    rec(0, total);
  }
  return out;
}

double evaluate_monomials(const std::vector<std::vector<unsigned>>& exponents, std::span<const double> coeffs,
                          std::span<const double> y) {
  double total = 0;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    double term = coeffs[j];
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (unsigned e = 0; e < exponents[j][i]; ++e) term *= y[i];
    }
    total += term;
  }
  return total;
}

CellProjection moment_project(const TestFunction& f, const DyadicCube& cube, unsigned degree) {
  const unsigned m = cube.dim();
  if (f.dim != m) throw DomainError("test function dimension differs from the cube's");
  const auto exps = monomial_exponents(m, degree);
  const std::size_t kappa = exps.size();

  // Gram matrix of the monomials on (0,1]^m: prod_i 1/(j_i + k_i + 1).
  Eigen::MatrixXd gram(kappa, kappa);
  for (std::size_t a = 0; a < kappa; ++a) {
    for (std::size_t b = 0; b < kappa; ++b) {
      double g = 1;
      for (unsigned i = 0; i < m; ++i) g /= exps[a][i] + exps[b][i] + 1.0;
      gram(a, b) = g;
    }
  }

  // Moments int y^k f(corner + side y) dy by tensor Gauss-Legendre.
  const GaussRule rule = gauss_legendre(std::max(2 * (degree + 1), 8u));
  const std::size_t q = rule.nodes.size();
  const double side = std::ldexp(1.0, -static_cast<int>(cube.level()));
  std::vector<double> corner(m);
  for (unsigned i = 0; i < m; ++i) corner[i] = static_cast<double>(cube.index(i)) * side;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(kappa);
  std::vector<std::size_t> node(m, 0);
  std::vector<double> y(m), x(m);
  std::size_t total = 1;
  for (unsigned i = 0; i < m; ++i) total *= q;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    double w = 1;
    for (unsigned i = 0; i < m; ++i) {
      node[i] = rem % q;
      rem /= q;
      y[i] = rule.nodes[node[i]];
      x[i] = corner[i] + side * y[i];
      w *= rule.weights[node[i]];
    }
    const double fx = f.value(x);
    if (!std::isfinite(fx)) throw DomainError("test function is not finite at a quadrature node");
    for (std::size_t a = 0; a < kappa; ++a) {
      double mono = 1;
      for (unsigned i = 0; i < m; ++i) {
        for (unsigned e = 0; e < exps[a][i]; ++e) mono *= y[i];
      }
      rhs(a) += w * mono * fx;
    }
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXd c = ldlt.solve(rhs);
  CellProjection out;
  out.coeffs.assign(c.data(), c.data() + c.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  out.condition = ev.maxCoeff() / ev.minCoeff();
  return out;
}

PiecewisePolynomial::PiecewisePolynomial(unsigned dim, unsigned degree, std::vector<DyadicCube> cells,
                                         std::vector<std::vector<double>> coeffs, double max_condition)
    : dim_(dim),
      degree_(degree),
      cells_(std::move(cells)),
      coeffs_(std::move(coeffs)),
      exponents_(monomial_exponents(dim, degree)),
      max_condition_(max_condition) {
  if (cells_.size() != coeffs_.size()) throw DomainError("one coefficient vector per cell required");
  std::set<unsigned> levels;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].dim() != dim_) throw DomainError("cell dimension mismatch");
    if (coeffs_[i].size() != exponents_.size()) throw DomainError("coefficient vector has wrong length");
    if (!lookup_.emplace(cells_[i], i).second) throw DomainError("duplicate cell");
    levels.insert(cells_[i].level());
  }
  levels_.assign(levels.begin(), levels.end());
  max_level_ = levels_.empty() ? 0 : levels_.back();
}

std::optional<std::size_t> PiecewisePolynomial::locate(std::span<const double> x) const {
  std::vector<std::uint64_t> idx(dim_);
  for (unsigned level : levels_) {
    const double scale = std::ldexp(1.0, static_cast<int>(level));
    const std::uint64_t top = (std::uint64_t{1} << level) - 1;
    for (unsigned i = 0; i < dim_; ++i) {
      const double c = std::ceil(x[i] * scale) - 1;
      idx[i] = c <= 0 ? 0 : std::min<std::uint64_t>(top, static_cast<std::uint64_t>(c));
    }
    auto it = lookup_.find(DyadicCube(level, idx));
    if (it != lookup_.end()) return it->second;
  }
  return std::nullopt;
}

double PiecewisePolynomial::operator()(std::span<const double> x) const {
  auto cell = locate(x);
  if (!cell) throw DomainError("point lies in no cell of the partition");
  const auto& cube = cells_[*cell];
  const double scale = std::ldexp(1.0, static_cast<int>(cube.level()));
  std::vector<double> y(dim_);
  for (unsigned i = 0; i < dim_; ++i) y[i] = x[i] * scale - static_cast<double>(cube.index(i));
  return evaluate_monomials(exponents_, coeffs_[*cell], y);
}

PiecewisePolynomial piecewise_project(const TestFunction& f, const std::vector<DyadicCube>& cells, unsigned degree,
                                      unsigned threads) {
  if (cells.empty()) throw DomainError("projection needs at least one cell");
  std::vector<CellProjection> proj(cells.size());
  detail::parallel_chunks(cells.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) proj[i] = moment_project(f, cells[i], degree);
  });
  std::vector<std::vector<double>> coeffs;
  double worst = 1;
  for (auto& p : proj) {
    worst = std::max(worst, p.condition);
    coeffs.push_back(std::move(p.coeffs));
  }
  return PiecewisePolynomial(cells.front().dim(), degree, cells, std::move(coeffs), worst);
}

PiecewisePolynomial piecewise_project(const TestFunction& f, const PartitionResult& partition, unsigned degree,
                                      unsigned threads) {
  std::vector<DyadicCube> cells;
  for (const auto& c : partition.cells) cells.push_back(c.cube);
  return piecewise_project(f, cells, degree, threads);
}

LqError lq_error(const TestFunction& f, const PiecewisePolynomial& approx, const MeasureModel& model,
                 const ExtendedReal& q, unsigned depth, const ComputeLimits& limits) {
  if (depth < approx.max_level() + 2) {
    throw DomainError("quadrature depth " + std::to_string(depth) + " is below finest cell level + 2 (" +
                      std::to_string(approx.max_level() + 2) + ")");
  }
  const auto cubes = enumerate_positive(model, depth, limits);
  std::vector<double> terms(cubes.size());
  const double exponent = q.is_infinite() ? 0.0 : q.value();
  detail::parallel_chunks(cubes.size(), limits.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto x = cubes[i].cube.midpoint_double();
      const double diff = std::abs(f.value(x) - approx(x));
      terms[i] = q.is_infinite() ? diff : to_double(cubes[i].mass) * std::pow(diff, exponent);
    }
  });
  LqError out;
  out.depth = depth;
  out.cubes = cubes.size();
  if (q.is_infinite()) {
    out.value = terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
  } else {
    out.value = std::pow(pairwise_sum(terms.data(), terms.size()), 1.0 / exponent);
  }
  return out;
}

DecayResult decay_experiment(const TestFunction& f, const MeasureModel& model, const EmbeddingParams& params,
                             const std::vector<double>& ts, const DecayOptions& options) {
  params.validate();
  if (params.q.is_infinite()) throw DomainError("decay experiments need q < inf");
  if (f.dim != model.dim()) throw DomainError("test function dimension differs from the measure's");
  const double rho = params.rho();
  const unsigned degree = params.sigma - 1;

  DecayResult res;
  res.function = f.name;
  res.tolerance = options.tolerance;

  auto curve = closed_form_spectrum(model);
  DimensionEstimate dims;
  if (curve) {
    dims.window_max = dims.window_min = (*curve)(0.0);
  } else {
    curve = empirical_spectrum(model, options.fallback_level, default_t_grid(), options.limits);
    dims = minkowski(model, options.fallback_level, options.fallback_level, options.limits);
  }
  res.predicted = upper_order(params, *curve, dims).upper(WidthType::Kolmogorov);

  std::vector<double> x, y;
  bool any_zero = false;
  for (double t : ts) {
    const auto part = build_partition(model, rho, t, options.limits);
    const auto approx = piecewise_project(f, part, degree, options.limits.threads);
    const auto err = lq_error(f, approx, model, params.q, part.max_level + options.extra_depth, options.limits);
    DecayRow row;
    row.t = t;
    row.card = part.card;
    row.max_level = part.max_level;
    row.error = err.value;
    row.logcard = std::log(static_cast<double>(part.card));
    row.logerror = err.value > 0 ? std::log(err.value) : -std::numeric_limits<double>::infinity();
    res.rows.push_back(row);
    if (err.value <= 1e-12 || part.degenerate) {
      any_zero = any_zero || err.value <= 1e-12;
      continue;
    }
    x.push_back(row.logcard);
    y.push_back(row.logerror);
  }
  if (x.size() < 3) {
    if (any_zero) {
      res.degenerate = true;
      res.slope = std::nan("");
      res.pass = true;
      return res;
    }
    throw DomainError("decay experiment needs at least 3 usable thresholds");
  }
  res.slope = least_squares(x, y).first;
  res.pass = res.slope <= res.predicted + options.tolerance;
  return res;
}

}  // namespace widthlab
