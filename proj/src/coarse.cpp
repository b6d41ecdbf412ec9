#include "widthlab/coarse.hpp"

#include "widthlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace widthlab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log2_j_value(const Rational& mass, unsigned level, double rho) {
  if (sgn(mass) == 0) return kNegInf;
  return log2_of(mass) - static_cast<double>(level) * rho;
}

double log2_j_value(const MeasureModel& model, const DyadicCube& cube, double rho) {
  if (!(rho > 0)) throw DomainError("rho must be positive");
  return log2_j_value(mass(model, cube), cube.level(), rho);
}

double j_value(const MeasureModel& model, const DyadicCube& cube, double rho) {
  return std::exp2(log2_j_value(model, cube, rho));
}

bool alpha_good(const Rational& mass, unsigned level, double rho, double alpha) {
  const double lhs = log2_j_value(mass, level, rho);
  const double rhs = -alpha * static_cast<double>(level);
  return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
}

std::uint64_t count_from_distribution(const LevelDistribution& dist, unsigned level, double rho, double alpha) {
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (!(rho > 0)) throw DomainError("rho must be positive");
  std::uint64_t count = 0;
  for (const auto& c : dist) {
    if (alpha_good(c.mass, level, rho, alpha)) count += c.count;
  }
  return count;
}

std::uint64_t count_N(const MeasureModel& model, unsigned level, double rho, double alpha,
                      const ComputeLimits& limits) {
  return count_from_distribution(level_distribution(model, level, limits), level, rho, alpha);
}

std::vector<CubeMass> good_cubes(const MeasureModel& model, unsigned level, double rho, double alpha,
                                 const ComputeLimits& limits) {
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  std::vector<CubeMass> out;
  for (auto& cm : enumerate_positive(model, level, limits)) {
    if (alpha_good(cm.mass, level, rho, alpha)) out.push_back(std::move(cm));
  }
  return out;
}

bool CoarseProfile::regular(double tol) const { return std::abs(optimized_upper - optimized_lower) <= tol; }

std::vector<double> default_alpha_grid(unsigned m, double rho) {
  std::vector<double> grid;
  const double top = m + rho + 2;
  for (int i = 0;; ++i) {
    const double a = std::round((0.1 + 0.05 * i) * 1e12) / 1e12;
    if (a > top + 1e-12) break;
    grid.push_back(a);
  }
  return grid;
}

CoarseProfile coarse_profile(const MeasureModel& model, const std::vector<unsigned>& levels, double rho,
                             const std::vector<double>& alpha_grid, const ComputeLimits& limits) {
  if (levels.empty() || alpha_grid.empty()) throw DomainError("coarse profile needs nonempty grids");
  if (!(rho > 0)) throw DomainError("rho must be positive");
  CoarseProfile prof;
  prof.rho = rho;
  prof.levels = levels;
  prof.alpha_grid = alpha_grid;
  for (unsigned n : levels) {
    if (n == 0) throw DomainError("coarse profile needs levels n >= 1");
    const auto dist = level_distribution(model, n, limits);
    prof.cards.push_back(cardinality(dist));
    std::vector<std::uint64_t> row;
    for (double a : alpha_grid) row.push_back(count_from_distribution(dist, n, rho, a));
    prof.counts.push_back(std::move(row));
  }
  prof.F_upper.assign(alpha_grid.size(), kNegInf);
  prof.F_lower.assign(alpha_grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto c = prof.counts[i][a];
      const double f = c == 0 ? kNegInf : std::log2(static_cast<double>(c)) / levels[i];
      prof.F_upper[a] = std::max(prof.F_upper[a], f);
      prof.F_lower[a] = std::min(prof.F_lower[a], f);
    }
  }
  prof.optimized_upper = 0;
  prof.optimized_lower = 0;
  for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
    const double up = prof.F_upper[a] / alpha_grid[a];
    const double lo = prof.F_lower[a] / alpha_grid[a];
    if (up > prof.optimized_upper) {
      prof.optimized_upper = up;
      prof.alpha_at_upper = alpha_grid[a];
    }
    if (lo > prof.optimized_lower) {
      prof.optimized_lower = lo;
      prof.alpha_at_lower = alpha_grid[a];
    }
  }
  return prof;
}

std::vector<CubeMass> well_separated(const std::vector<CubeMass>& cubes) {
  if (cubes.empty()) throw DomainError("well-separated selection needs a nonempty family");
  const unsigned level = cubes.front().cube.level();
  const unsigned m = cubes.front().cube.dim();
  for (const auto& c : cubes) {
    if (c.cube.level() != level || c.cube.dim() != m) {
      throw ValidationError("well-separated selection needs cubes of a single level");
    }
  }
  std::vector<std::size_t> order(cubes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cubes[a].mass != cubes[b].mass) return cubes[a].mass > cubes[b].mass;
    return cubes[a].cube < cubes[b].cube;
  });

  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> survivors;
  for (std::size_t i = 0; i < cubes.size(); ++i) survivors.emplace(cubes[i].cube, i);

  std::size_t window = 1;
  for (unsigned i = 0; i < m; ++i) window *= 5;
  const std::int64_t bound = std::int64_t{1} << level;

  // Survivors within Chebyshev index distance 2, i.e. whose interiors meet the
  // 5-fold enlargement of `cube`.
  auto near = [&](const DyadicCube& cube) {
    std::vector<DyadicCube> out;
    std::vector<std::uint64_t> idx(m);
    for (std::size_t code = 0; code < window; ++code) {
      std::size_t rem = code;
      bool inside = true;
      bool self = true;
      for (unsigned a = 0; a < m; ++a) {
        const std::int64_t off = static_cast<std::int64_t>(rem % 5) - 2;
        rem /= 5;
        const std::int64_t l = static_cast<std::int64_t>(cube.index(a)) + off;
        if (l < 0 || l >= bound) {
          inside = false;
          break;
        }
        if (off != 0) self = false;
        idx[a] = static_cast<std::uint64_t>(l);
      }
      if (!inside || self) continue;
      DyadicCube other(level, idx);
      if (survivors.count(other)) out.push_back(std::move(other));
    }
    return out;
  };

  for (std::size_t i : order) {
    const auto& cube = cubes[i].cube;
    if (!survivors.count(cube)) continue;
    for (const auto& other : near(cube)) survivors.erase(other);
  }

  std::vector<CubeMass> out;
  for (const auto& [cube, i] : survivors) out.push_back(cubes[i]);
  std::sort(out.begin(), out.end(), [](const CubeMass& a, const CubeMass& b) { return a.cube < b.cube; });
  return out;
}

std::vector<DyadicCube> well_separated(const std::vector<DyadicCube>& cubes, const MeasureModel& model) {
  std::vector<CubeMass> with_mass;
  for (const auto& c : cubes) with_mass.push_back({c, mass(model, c)});
  std::vector<DyadicCube> out;
  for (auto& cm : well_separated(with_mass)) out.push_back(std::move(cm.cube));
  return out;
}

bool threshold_property_holds(const MeasureModel& model, const std::vector<CubeMass>& cubes,
                              const ComputeLimits& limits) {
  if (cubes.empty()) return true;
  Rational inf_in = cubes.front().mass;
  std::unordered_map<DyadicCube, bool, DyadicCubeHash> in;
  for (const auto& c : cubes) {
    inf_in = std::min(inf_in, c.mass);
    in.emplace(c.cube, true);
  }
  for (const auto& cm : enumerate_positive(model, cubes.front().cube.level(), limits)) {
    if (!in.count(cm.cube) && cm.mass > inf_in) return false;
  }
  return true;
}

bool dominates_neighbors(const MeasureModel& model, const DyadicCube& cube) {
  const Rational own = mass(model, cube);
  for (const auto& nb : neighbors(cube)) {
    if (mass(model, nb) > own) return false;
  }
  return true;
}

}  // namespace widthlab
