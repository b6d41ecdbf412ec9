#include "widthlab/empirical.hpp"
#include "widthlab/error.hpp"
#include "widthlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace widthlab {

namespace {

std::vector<std::vector<unsigned>> exact_order(unsigned dim, unsigned sigma) {
  std::vector<std::vector<unsigned>> out;
  for (auto& k : monomial_exponents(dim, sigma)) {
    unsigned total = 0;
    for (auto v : k) total += v;
    if (total == sigma) out.push_back(std::move(k));
  }
  return out;
}

double gradient_magnitude_with(const TestFunction& u, std::span<const double> x,
                               const std::vector<std::vector<unsigned>>& orders) {
  double s = 0;
  for (const auto& k : orders) {
    const double d = u.partial(x, k);
    s += d * d;
  }
  return std::sqrt(s);
}

void require_derivatives(const TestFunction& u, unsigned sigma) {
  if (!u.partial || u.max_derivative < sigma) {
    throw DomainError("test function '" + u.name + "' has no analytic derivatives of order " + std::to_string(sigma));
  }
}

}  // namespace

double gradient_magnitude(const TestFunction& u, std::span<const double> x, unsigned sigma) {
  require_derivatives(u, sigma);
  return gradient_magnitude_with(u, x, exact_order(u.dim, sigma));
}

double sobolev_seminorm_on(const TestFunction& u, const std::vector<double>& lower, double side, unsigned sigma,
                           const ExtendedReal& p, unsigned resolution) {
  require_derivatives(u, sigma);
  const unsigned m = u.dim;
  if (lower.size() != m) throw DomainError("domain corner has wrong dimension");
  if (resolution > 14) throw DomainError("resolution above 14 is not supported");
  const double cell = side * std::ldexp(1.0, -static_cast<int>(resolution));
  if (cell > u.feature_scale * (1 + 1e-12)) {
    throw DomainError("resolution too coarse: grid step " + std::to_string(cell) + " exceeds the feature scale " +
                      std::to_string(u.feature_scale) + " of '" + u.name + "'");
  }
  const auto orders = exact_order(m, sigma);
  const GaussRule rule = gauss_legendre(std::max(2 * sigma, 8u));
  const std::size_t qn = rule.nodes.size();
  const std::size_t cells_per_axis = std::size_t{1} << resolution;
  std::size_t cell_count = 1, node_count = 1;
  for (unsigned i = 0; i < m; ++i) {
    cell_count *= cells_per_axis;
    node_count *= qn;
  }
  const bool sup = p.is_infinite();
  const double pe = sup ? 0.0 : p.value();
  const double volume = std::pow(cell, static_cast<double>(m));

  std::vector<double> per_cell(cell_count, 0.0);
  std::vector<double> x(m);
  for (std::size_t c = 0; c < cell_count; ++c) {
    std::size_t crem = c;
    std::vector<double> base(m);
    for (unsigned i = 0; i < m; ++i) {
      base[i] = lower[i] + cell * static_cast<double>(crem % cells_per_axis);
      crem /= cells_per_axis;
    }
    double acc = 0;
    for (std::size_t k = 0; k < node_count; ++k) {
      std::size_t rem = k;
      double w = 1;
      for (unsigned i = 0; i < m; ++i) {
        const std::size_t j = rem % qn;
        rem /= qn;
        x[i] = base[i] + cell * rule.nodes[j];
        w *= rule.weights[j];
      }
      const double g = gradient_magnitude_with(u, x, orders);
      if (sup) {
        acc = std::max(acc, g);
      } else {
        acc += w * std::pow(g, pe);
      }
    }
    per_cell[c] = sup ? acc : acc * volume;
  }
  if (sup) return *std::max_element(per_cell.begin(), per_cell.end());
  return std::pow(pairwise_sum(per_cell.data(), per_cell.size()), 1.0 / pe);
}

double sobolev_seminorm(const TestFunction& u, unsigned sigma, const ExtendedReal& p, unsigned resolution) {
  return sobolev_seminorm_on(u, std::vector<double>(u.dim, 0.0), 1.0, sigma, p, resolution);
}

ScalingCheck scaling_check(const TestFunction& u, const DyadicCube& cube, unsigned sigma, const ExtendedReal& p,
                           unsigned resolution) {
  if (u.dim != cube.dim()) throw DomainError("test function dimension differs from the cube's");
  const double side = std::ldexp(1.0, -static_cast<int>(cube.level()));
  std::vector<double> corner(cube.dim());
  for (unsigned i = 0; i < cube.dim(); ++i) corner[i] = static_cast<double>(cube.index(i)) * side;
  const TestFunction uq = rescaled(u, corner, side);
  ScalingCheck s;
  s.lhs = sobolev_seminorm_on(uq, corner, side, sigma, p, resolution);
  const double rho_hat = sigma - cube.dim() * to_double(p.inverse());
  s.rhs = std::exp2(cube.level() * rho_hat) * sobolev_seminorm(u, sigma, p, resolution);
  s.ratio = s.lhs / s.rhs;
  return s;
}

ProbeResult packing_probe(const MeasureModel& model, unsigned n, double alpha, const EmbeddingParams& params,
                          const ProbeOptions& options) {
  params.validate();
  if (params.q.is_infinite()) throw DomainError("packing probe needs q < inf");
  if (params.m != model.dim()) throw DomainError("embedding dimension differs from the measure's");
  const unsigned m = model.dim();
  const double q = params.q.value();
  const double rho = params.rho();

  ProbeResult r;
  r.n = n;
  r.alpha = alpha;
  const auto good = good_cubes(model, n, rho, alpha, options.limits);
  r.good_count = good.size();
  if (good.empty()) throw DomainError("no alpha-good cubes at level " + std::to_string(n));
  const auto family = well_separated(good);
  for (const auto& c : family) r.family.push_back(c.cube);

  // Exact disjointness of the 3-fold enlargements.
  r.supports_disjoint = true;
  std::vector<Box> boxes;
  for (const auto& c : r.family) boxes.push_back(scaled_box(c, Rational(3)));
  for (std::size_t i = 0; i < boxes.size() && r.supports_disjoint; ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (!boxes[i].interiors_disjoint(boxes[j])) {
        r.supports_disjoint = false;
        break;
      }
    }
  }
  if (!r.supports_disjoint) throw Error("well-separated family has overlapping supports");

  const TestFunction u = mollifier_bump(m);
  const double side = 3 * std::ldexp(1.0, -static_cast<int>(n));
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> member;
  std::vector<TestFunction> bumps;
  for (std::size_t i = 0; i < r.family.size(); ++i) {
    member.emplace(r.family[i], i);
    auto mid = r.family[i].midpoint_double();
    for (auto& v : mid) v -= side / 2;
    bumps.push_back(rescaled(u, mid, side));
  }

  // Quadrature nodes: centres of positive-mass cubes at the finer depth, each
  // attributed to the (unique) bump whose box contains it.
  const unsigned depth = n + options.extra_depth;
  const auto cubes = enumerate_positive(model, depth, options.limits);
  const std::size_t count = cubes.size();
  std::vector<double> weight(count), value(count, 0.0);
  std::vector<long> owner(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    weight[i] = to_double(cubes[i].mass);
    const auto x = cubes[i].cube.midpoint_double();
    for (const auto& nb : neighbors(cubes[i].cube.ancestor(n))) {
      auto it = member.find(nb);
      if (it == member.end()) continue;
      const double v = bumps[it->second].value(x);
      if (v != 0) {
        owner[i] = static_cast<long>(it->second);
        value[i] = v;
      }
    }
  }

  auto lq_norm = [&](const std::vector<double>& f) {
    std::vector<double> terms(count);
    for (std::size_t i = 0; i < count; ++i) terms[i] = weight[i] * std::pow(std::abs(f[i]), q);
    return std::pow(pairwise_sum(terms.data(), terms.size()), 1.0 / q);
  };
  auto average = [&](const std::vector<double>& f) {
    std::vector<double> num(r.family.size(), 0.0), den(r.family.size(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      if (owner[i] < 0) continue;
      num[owner[i]] += weight[i] * f[i] * value[i];
      den[owner[i]] += weight[i] * value[i] * value[i];
    }
    std::vector<double> out(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      if (owner[i] >= 0 && den[owner[i]] > 0) out[i] = num[owner[i]] / den[owner[i]] * value[i];
    }
    return out;
  };

  r.norm_q = lq_norm(value);
  const std::size_t c = r.family.size();
  const double count_factor = params.p.is_infinite() ? 1.0 : std::pow(static_cast<double>(c), to_double(params.p.inverse()));
  const auto& first = r.family.front();
  auto lower = first.midpoint_double();
  for (auto& v : lower) v -= side / 2;
  r.norm_sobolev = sobolev_seminorm_on(bumps.front(), lower, side, params.sigma, params.p, options.resolution) * count_factor;
  r.norm_sobolev_closed = std::pow(side, -params.rho_hat()) *
                          sobolev_seminorm(u, params.sigma, params.p, options.resolution) * count_factor;
  r.ratio = r.norm_q / r.norm_sobolev;
  r.normalized = r.ratio * std::exp2(alpha * n / q);

  r.operator_bound = std::pow(3.0, static_cast<double>(m));
  {
    const auto image = average(value);
    std::vector<double> diff(count);
    for (std::size_t i = 0; i < count; ++i) diff[i] = image[i] - value[i];
    r.span_reproduction_error = r.norm_q > 0 ? lq_norm(diff) / r.norm_q : 0.0;
    r.operator_max_ratio = r.norm_q > 0 ? lq_norm(image) / r.norm_q : 0.0;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coin(-1.0, 1.0);
  for (unsigned trial = 0; trial < options.operator_trials; ++trial) {
    std::vector<double> f(count);
    if (trial % 2 == 0) {
      for (auto& v : f) v = coin(rng);  // arbitrary piecewise-constant function
    } else {
      std::vector<double> a(c);
      for (auto& v : a) v = coin(rng);
      for (std::size_t i = 0; i < count; ++i) f[i] = owner[i] >= 0 ? a[owner[i]] * value[i] : 0.0;
    }
    const double base = lq_norm(f);
    if (base == 0) continue;
    r.operator_max_ratio = std::max(r.operator_max_ratio, lq_norm(average(f)) / base);
  }
  r.operator_ok = r.operator_max_ratio <= r.operator_bound * (1 + 1e-12) && r.span_reproduction_error <= 1e-12;
  return r;
}

}  // namespace widthlab
