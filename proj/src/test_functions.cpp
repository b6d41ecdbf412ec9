#include "widthlab/empirical.hpp"
#include "widthlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace widthlab {

GaussRule gauss_legendre(unsigned order) {
  if (order == 0) throw DomainError("Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const unsigned n = order;
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // recompute the derivative at the converged node
      double p0 = 1, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]; nodes ascending
    rule.nodes[i] = 0.5 * (1 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

namespace {

// ---- standard mollifier psi(r) = C exp(1/(r^2-1)) on (-1,1) -------------

// psi^{(k)}(r) / psi(r) for k = 0..3, expressed through g = 1/(r^2 - 1).
double psi_unnormalized_derivative(double r, unsigned k) {
  if (r <= -1 || r >= 1) return 0;
  const double s = r * r - 1;
  const double e = std::exp(1.0 / s);
  const double g1 = -2 * r / (s * s);
  if (k == 0) return e;
  if (k == 1) return e * g1;
  const double g2 = (6 * r * r + 2) / (s * s * s);
  if (k == 2) return e * (g2 + g1 * g1);
  const double g3 = -24 * r * (r * r + 1) / (s * s * s * s);
  if (k == 3) return e * (g3 + 3 * g1 * g2 + g1 * g1 * g1);
  throw DomainError("mollifier derivatives are available up to order 4");
}

class Mollifier {
 public:
  Mollifier() {
    const GaussRule rule = gauss_legendre(10);
    cumulative_.assign(kCells + 1, 0.0);
    for (int c = 0; c < kCells; ++c) {
      const double a = -1 + 2.0 * c / kCells;
      double s = 0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        s += rule.weights[j] * psi_unnormalized_derivative(a + kH * rule.nodes[j], 0);
      }
      cumulative_[c + 1] = cumulative_[c] + s * kH;
    }
    norm_ = 1.0 / cumulative_.back();
    for (auto& v : cumulative_) v *= norm_;
  }

  double psi(double r, unsigned k) const { return norm_ * psi_unnormalized_derivative(r, k); }

  // Phi(s) = int_{-1}^s psi, by cubic Hermite interpolation of the tabulated
  // integral with the exact derivative psi at the table nodes.
  double Phi(double s) const {
    if (s <= -1) return 0;
    if (s >= 1) return 1;
    const double pos = (s + 1) / kH;
    int c = std::min(kCells - 1, static_cast<int>(pos));
    const double u = pos - c;
    const double a = -1 + kH * c;
    const double y0 = cumulative_[c], y1 = cumulative_[c + 1];
    const double d0 = psi(a, 0) * kH, d1 = psi(a + kH, 0) * kH;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
  }

 private:
  static constexpr int kCells = 4096;
  static constexpr double kH = 2.0 / kCells;
  std::vector<double> cumulative_;
  double norm_ = 1;
};

const Mollifier& mollifier() {
  static const Mollifier instance;
  return instance;
}

constexpr double kEps = 1.0 / 12.0;

// u1 = psi_eps * 1_[1/4,3/4] and its derivatives.
double bump_1d(double x, unsigned k) {
  const auto& mol = mollifier();
  const double a = (x - 0.25) / kEps;
  const double b = (x - 0.75) / kEps;
  if (k == 0) return std::clamp(mol.Phi(a) - mol.Phi(b), 0.0, 1.0);
  return (mol.psi(a, k - 1) - mol.psi(b, k - 1)) / std::pow(kEps, static_cast<double>(k));
}

double sin_1d(double x, unsigned k) {
  const double w = 2 * std::numbers::pi;
  return std::pow(w, static_cast<double>(k)) * std::sin(w * x + k * std::numbers::pi / 2);
}

TestFunction tensor_product(std::string name, unsigned dim, double (*one)(double, unsigned), unsigned max_derivative,
                            double feature_scale) {
  TestFunction f;
  f.name = std::move(name);
  f.dim = dim;
  f.max_derivative = max_derivative;
  f.feature_scale = feature_scale;
  f.value = [one](std::span<const double> x) {
    double v = 1;
    for (double xi : x) v *= one(xi, 0);
    return v;
  };
  f.partial = [one](std::span<const double> x, std::span<const unsigned> k) {
    double v = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v *= one(x[i], k[i]);
      if (v == 0) break;
    }
    return v;
  };
  return f;
}

}  // namespace

TestFunction mollifier_bump(unsigned dim) { return tensor_product("bump", dim, bump_1d, 4, kEps); }

TestFunction polynomial_function(unsigned dim, std::vector<std::vector<unsigned>> exponents, std::vector<double> coeffs,
                                 std::vector<double> origin, double scale) {
  if (exponents.size() != coeffs.size()) throw DomainError("polynomial needs one coefficient per monomial");
  if (origin.empty()) origin.assign(dim, 0.0);
  unsigned degree = 0;
  for (const auto& e : exponents) {
    if (e.size() != dim) throw DomainError("monomial exponent has wrong dimension");
    unsigned total = 0;
    for (auto v : e) total += v;
    degree = std::max(degree, total);
  }
  TestFunction f;
  f.name = "polynomial";
  f.dim = dim;
  f.degree = degree;
  f.max_derivative = 64;
  auto data = std::make_shared<const std::tuple<std::vector<std::vector<unsigned>>, std::vector<double>,
                                                std::vector<double>, double>>(exponents, coeffs, origin, scale);
  f.value = [data](std::span<const double> x) {
    const auto& [exps, cs, org, sc] = *data;
    double total = 0;
    for (std::size_t j = 0; j < exps.size(); ++j) {
      double term = cs[j];
      for (std::size_t i = 0; i < x.size(); ++i) term *= std::pow((x[i] - org[i]) / sc, static_cast<double>(exps[j][i]));
      total += term;
    }
    return total;
  };
  f.partial = [data](std::span<const double> x, std::span<const unsigned> k) {
    const auto& [exps, cs, org, sc] = *data;
    double total = 0;
    for (std::size_t j = 0; j < exps.size(); ++j) {
      double term = cs[j];
      for (std::size_t i = 0; i < x.size() && term != 0; ++i) {
        const unsigned e = exps[j][i];
        if (k[i] > e) {
          term = 0;
          break;
        }
        double falling = 1;
        for (unsigned d = 0; d < k[i]; ++d) falling *= e - d;
        term *= falling * std::pow((x[i] - org[i]) / sc, static_cast<double>(e - k[i])) /
                std::pow(sc, static_cast<double>(k[i]));
      }
      total += term;
    }
    return total;
  };
  return f;
}

TestFunction make_test_function(std::string_view name, unsigned dim) {
  if (dim == 0) throw DomainError("test functions need dimension >= 1");
  auto axis0 = [dim](unsigned power) {
    std::vector<unsigned> e(dim, 0);
    e[0] = power;
    return e;
  };
  if (name == "const") {
    auto f = polynomial_function(dim, {std::vector<unsigned>(dim, 0)}, {1.0});
    f.name = "const";
    return f;
  }
  if (name == "x") {
    auto f = polynomial_function(dim, {axis0(1)}, {1.0});
    f.name = "x";
    return f;
  }
  if (name == "x2") {
    auto f = polynomial_function(dim, {axis0(2)}, {1.0});
    f.name = "x2";
    return f;
  }
  if (name == "sin") return tensor_product("sin", dim, sin_1d, 64, 1.0 / 4);
  if (name == "bump") return mollifier_bump(dim);
  throw ValidationError("unknown test function '" + std::string(name) + "' (catalog: const, x, x2, sin, bump)");
}

std::vector<std::string> catalog_names() { return {"const", "x", "x2", "sin", "bump"}; }

TestFunction rescaled(const TestFunction& u, std::vector<double> lower, double side) {
  if (lower.size() != u.dim) throw DomainError("rescaling corner has wrong dimension");
  if (!(side > 0)) throw DomainError("rescaling side must be positive");
  TestFunction out = u;
  out.name = u.name + "@scaled";
  out.feature_scale = u.feature_scale * side;
  auto inner = std::make_shared<const TestFunction>(u);
  auto corner = std::make_shared<const std::vector<double>>(std::move(lower));
  out.value = [inner, corner, side](std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - (*corner)[i]) / side;
    return inner->value(y);
  };
  if (u.partial) {
    out.partial = [inner, corner, side](std::span<const double> x, std::span<const unsigned> k) {
      std::vector<double> y(x.size());
      unsigned order = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = (x[i] - (*corner)[i]) / side;
        order += k[i];
      }
      return inner->partial(y, k) * std::pow(side, -static_cast<double>(order));
    };
  }
  return out;
}

double partial_by_differences(const TestFunction& u, std::span<const double> x, std::span<const unsigned> k,
                              double h) {
  // Apply the central difference (f(x + h e_i) - f(x - h e_i)) / 2h once per
  // unit of k_i, recursively over the axes.
  std::vector<double> point(x.begin(), x.end());
  std::vector<unsigned> remaining(k.begin(), k.end());
  std::function<double()> rec = [&]() -> double {
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] == 0) continue;
      --remaining[i];
      const double saved = point[i];
      point[i] = saved + h;
      const double up = rec();
      point[i] = saved - h;
      const double down = rec();
      point[i] = saved;
      ++remaining[i];
      return (up - down) / (2 * h);
    }
    return u.value(point);
  };
  return rec();
}

}  // namespace widthlab
