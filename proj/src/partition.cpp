#include "widthlab/partition.hpp"

#include "parallel.hpp"
#include "widthlab/coarse.hpp"
#include "widthlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace widthlab {

namespace {

bool meets_threshold(double log2_j, double log2_t) {
  return log2_j >= log2_t - 1e-12 * std::max(1.0, std::abs(log2_t));
}

}  // namespace

PartitionResult build_partition(const MeasureModel& model, double rho, double t, const ComputeLimits& limits) {
  if (!(t > 0)) throw DomainError("threshold t must be positive");
  if (!(rho > 0)) throw DomainError("rho must be positive");
  const double log2_t = std::log2(t);
  PartitionResult res;
  res.t = t;
  res.rho = rho;

  const DyadicCube root = DyadicCube::root(model.dim());
  if (!meets_threshold(log2_j_value(Rational(1), 0, rho), log2_t)) {
    res.degenerate = true;
    res.cells.push_back({root, Rational(1)});
  } else {
    std::vector<CubeMass> frontier{{root, Rational(1)}};
    const unsigned branches = 1u << model.dim();
    while (!frontier.empty()) {
      if (frontier.front().cube.level() >= kMaxLevel) throw ResourceError("partition descent reached the depth limit");
      // For every frontier cube (J >= t) split its positive children into
      // emitted cells and cubes to refine further.
      std::vector<std::vector<CubeMass>> emit(frontier.size()), refine(frontier.size());
      detail::parallel_chunks(frontier.size(), limits.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          for (unsigned j = 0; j < branches; ++j) {
            DyadicCube c = frontier[i].cube.child(j);
            Rational w = mass(model, c);
            if (sgn(w) == 0) continue;
            const bool keep_going = meets_threshold(log2_j_value(w, c.level(), rho), log2_t);
            (keep_going ? refine[i] : emit[i]).push_back({std::move(c), std::move(w)});
          }
        }
      });
      std::vector<CubeMass> next;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        for (auto& cm : emit[i]) res.cells.push_back(std::move(cm));
        for (auto& cm : refine[i]) next.push_back(std::move(cm));
      }
      if (res.cells.size() + next.size() > limits.max_cells) {
        throw ResourceError("partition cell count exceeds the cap " + std::to_string(limits.max_cells));
      }
      frontier = std::move(next);
    }
  }

  std::sort(res.cells.begin(), res.cells.end(), [](const CubeMass& a, const CubeMass& b) { return a.cube < b.cube; });
  res.card = res.cells.size();
  res.min_level = res.cells.front().cube.level();
  res.max_level = res.min_level;
  double max_log2_j = -INFINITY;
  for (const auto& c : res.cells) {
    res.min_level = std::min(res.min_level, c.cube.level());
    res.max_level = std::max(res.max_level, c.cube.level());
    max_log2_j = std::max(max_log2_j, log2_j_value(c.mass, c.cube.level(), rho));
  }
  res.max_j = std::exp2(max_log2_j);
  return res;
}

std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("least squares needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("least squares needs distinct abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

EntropyFit entropy_slope(const MeasureModel& model, double rho, const std::vector<double>& ts,
                         const ComputeLimits& limits) {
  EntropyFit fit;
  std::vector<double> x, y;
  for (double t : ts) {
    auto p = build_partition(model, rho, t, limits);
    if (p.degenerate) {
      fit.excluded.push_back(t);
      continue;
    }
    fit.ts.push_back(t);
    fit.cards.push_back(p.card);
    x.push_back(-std::log(t));
    y.push_back(std::log(static_cast<double>(p.card)));
  }
  if (x.size() < 3) throw DomainError("entropy slope needs at least 3 non-degenerate thresholds");
  const auto [lo, hi] = std::minmax_element(fit.ts.begin(), fit.ts.end());
  if (std::log10(*hi / *lo) < 3 - 1e-9) throw DomainError("entropy slope needs thresholds spanning 3 decades");
  std::tie(fit.slope, fit.intercept) = least_squares(x, y);
  return fit;
}

}  // namespace widthlab
