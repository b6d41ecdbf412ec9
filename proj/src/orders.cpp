#include "widthlab/orders.hpp"

#include "widthlab/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace widthlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Rational kHalf(mpz_class(1), mpz_class(2));

}  // namespace

ExtendedReal ExtendedReal::from_reciprocal(Rational inv) {
  if (inv < 0 || inv > 1) throw ValidationError("Lebesgue exponent must lie in [1, inf]");
  return ExtendedReal(std::move(inv));
}

ExtendedReal ExtendedReal::from_rational(const Rational& r) {
  if (r < 1) throw ValidationError("Lebesgue exponent " + widthlab::to_string(r) + " is below 1");
  return ExtendedReal(Rational(1) / r);
}

ExtendedReal ExtendedReal::parse(std::string_view text) {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "inf" || lower == "infinity" || lower == "+inf") return infinity();
  return from_rational(rational_from_string(text));
}

ExtendedReal ExtendedReal::from_double(double r) {
  if (std::isinf(r) && r > 0) return infinity();
  return from_rational(rational_from_double(r));
}

double ExtendedReal::value() const { return is_infinite() ? kInf : to_double(Rational(1) / inv_); }

std::string ExtendedReal::to_string() const {
  if (is_infinite()) return "inf";
  Rational r = Rational(1) / inv_;
  if (r.get_den() == 1) return r.get_num().get_str();
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, r.get_d());
  return std::string(buf, res.ptr);
}

ExtendedReal dual_exponent(const ExtendedReal& r) { return ExtendedReal::from_reciprocal(Rational(1) - r.inverse()); }

char width_letter(WidthType type) {
  switch (type) {
    case WidthType::Kolmogorov: return 'K';
    case WidthType::Gelfand: return 'G';
    case WidthType::Linear: return 'L';
  }
  return '?';
}

Rational width_exponent(WidthType type, const ExtendedReal& p, const ExtendedReal& q) {
  const Rational& a = p.inverse();  // 1/p
  const Rational& b = q.inverse();  // 1/q
  const Rational& h = kHalf;
  const Rational a_dual = Rational(1) - a;  // 1/p'

  struct Row {
    bool applies;
    Rational value;
  };
  std::vector<Row> rows;
  switch (type) {
    case WidthType::Kolmogorov:
      rows = {{b >= a, b - a},                   // q <= p
              {a <= h && a >= b, b - a},         // 2 <= p <= q
              {a >= b && b >= h, Rational(0)},   // p <= q <= 2
              {a >= h && b <= h, b - h}};        // p <= 2 <= q
      break;
    case WidthType::Gelfand:
      rows = {{b >= a, b - a},                   // q <= p
              {a >= b && b >= h, b - a},         // p <= q <= 2
              {a <= h && a > b, Rational(0)},    // 2 <= p < q
              {a >= h && b <= h, h - a}};        // p <= 2 <= q
      break;
    case WidthType::Linear:
      rows = {{b >= a, b - a},                                 // q <= p
              {a <= h && a >= b, Rational(0)},                 // 2 <= p <= q
              {a >= b && b >= h, Rational(0)},                 // p <= q <= 2
              {a >= h && b <= h && b >= a_dual, b - h},        // p <= 2 <= q <= p'
              {a >= h && b <= a_dual, h - a}};                 // p <= 2, p' <= q
      break;
  }
  const Row* first = nullptr;
  for (const auto& row : rows) {
    if (!row.applies) continue;
    if (!first) {
      first = &row;
    } else if (row.value != first->value) {
      throw Error(std::string("width exponent table rows disagree for ") + width_letter(type) + " at p=" +
                  p.to_string() + ", q=" + q.to_string());
    }
  }
  if (!first) throw Error("width exponent table does not cover p=" + p.to_string() + ", q=" + q.to_string());
  return first->value;
}

std::string case_label(const ExtendedReal& p, const ExtendedReal& q) {
  const Rational& a = p.inverse();
  const Rational& b = q.inverse();
  if (b >= a) return "I";
  if (b >= kHalf) return "II";
  if (a <= kHalf) return "III";
  if (b >= Rational(1) - a) return "IV.a";
  return "IV.b";
}

Rational EmbeddingParams::rho_hat_exact() const { return Rational(sigma) - Rational(m) * p.inverse(); }

double EmbeddingParams::rho_hat() const { return to_double(rho_hat_exact()); }

double EmbeddingParams::rho() const { return q.is_infinite() ? kInf : to_double(rho_hat_exact() / q.inverse()); }

void EmbeddingParams::validate() const {
  if (m < 1) throw ValidationError("dimension m must be at least 1");
  if (sigma < 1) throw ValidationError("smoothness sigma must be a positive integer");
  if (rho_hat_exact() <= 0) {
    throw ValidationError("standing assumption rho_hat = sigma - m/p > 0 violated (rho_hat = " +
                          to_string(rho_hat_exact()) + ")");
  }
}

double upper_S(const SpectrumCurve& curve, const DimensionEstimate& dims, const EmbeddingParams& params) {
  params.validate();
  if (params.q.is_infinite()) {
    if (!(dims.window_max > 0)) throw DomainError("upper box dimension is 0; Sbar is undefined for q = inf");
    return params.rho_hat() / dims.window_max;
  }
  const double s = s_b_solve(curve, params.rho());
  if (!(s > 0)) throw DomainError("s_rho = 0 (finite support); Sbar is infinite");
  return 1.0 / (params.q.value() * s);
}

double upper_S_by_rescaled_crossing(const SpectrumCurve& curve, const EmbeddingParams& params) {
  params.validate();
  if (params.q.is_infinite()) throw DomainError("rescaled crossing needs q < inf");
  const double q = params.q.value();
  const double rho_hat = params.rho_hat();
  auto g = [&](double t) { return curve(t / q) - t * rho_hat; };
  if (g(0.0) <= 0) throw DomainError("s_rho = 0 (finite support); Sbar is infinite");
  double hi;
  if (curve.kind() == SpectrumCurve::Kind::Empirical) {
    hi = q * curve.t_grid().back();
    if (g(hi) > 0) throw DomainError("crossing lies above the empirical t grid");
  } else {
    hi = 1.5 * q;
    while (g(hi) > 0) {
      hi *= 2;
      if (hi > 64 * q) throw DomainError("no crossing below t = 64 q");
    }
  }
  double lo = 0;
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 1.0 / hi;
}

OrderReport upper_order(const EmbeddingParams& params, const SpectrumCurve& curve, const DimensionEstimate& dims) {
  params.validate();
  OrderReport r;
  r.params = params;
  r.curve = curve.description();
  r.case_label = case_label(params.p, params.q);
  r.dim_upper = dims.window_max;
  r.dim_lower = dims.window_min;
  r.S_upper = upper_S(curve, dims, params);
  if (params.q.is_infinite()) {
    r.s_rho = std::nan("");
    r.S_upper_check = std::nan("");
  } else {
    r.s_rho = s_b_solve(curve, params.rho());
    r.S_upper_check = upper_S_by_rescaled_crossing(curve, params);
    if (std::abs(r.S_upper - r.S_upper_check) > 1e-8 * std::max(1.0, r.S_upper)) {
      throw Error("Sbar routes disagree: " + std::to_string(r.S_upper) + " vs " + std::to_string(r.S_upper_check));
    }
  }
  for (auto t : kWidthTypes) {
    const int i = static_cast<int>(t);
    r.exponent[i] = width_exponent(t, params.p, params.q);
    r.upper_order[i] = -r.S_upper + to_double(r.exponent[i]);
  }
  if (r.exponent[2] != std::max(r.exponent[0], r.exponent[1])) throw Error("e_L differs from max(e_K, e_G)");
  return r;
}

void lower_order(OrderReport& r, const CoarseProfile* coarse, double regularity_tol) {
  const auto& params = r.params;
  r.has_lower = true;
  if (params.q.is_infinite()) {
    if (!(r.dim_lower > 0)) throw DomainError("lower box dimension is 0; lower orders are undefined for q = inf");
    const double base = -params.rho_hat() / r.dim_lower;
    const double inv_p = to_double(params.p.inverse());
    const bool p_above_2 = params.p.inverse() < kHalf;
    const double k = p_above_2 ? base - inv_p : base - 0.5;
    const double g = p_above_2 ? base : base + 0.5 - inv_p;
    r.lower_lo = r.lower_hi = {k, g, g};
    r.S_lower = params.rho_hat() / r.dim_lower;
    r.lower_exact = true;
    r.regularity_flag = std::abs(r.dim_upper - r.dim_lower) <= regularity_tol;
    return;
  }
  if (!coarse) throw DomainError("lower orders for q < inf need a coarse profile");
  r.optimized_upper = coarse->optimized_upper;
  r.optimized_lower = coarse->optimized_lower;
  const double S_lower = coarse->optimized_lower > 0 ? 1.0 / (params.q.value() * coarse->optimized_lower) : kInf;
  r.S_lower = S_lower;
  // The sandwich has S_lower >= S_upper; a finite-level estimate can invert it.
  const double gap = std::max(0.0, S_lower - r.S_upper);
  for (int i = 0; i < 3; ++i) {
    r.lower_hi[i] = r.upper_order[i];
    r.lower_lo[i] = r.upper_order[i] - gap;
  }
  r.lower_exact = false;
  r.regularity_flag = coarse->regular(regularity_tol);
}

HilbertCheck hilbert_check(const EmbeddingParams& params, const SpectrumCurve& curve, const DimensionEstimate& dims) {
  if (params.q.inverse() != kHalf) throw DomainError("Hilbert-space check needs q = 2");
  const OrderReport r = upper_order(params, curve, dims);
  const double base = -1.0 / (2.0 * r.s_rho);
  const double inv_p = to_double(params.p.inverse());
  HilbertCheck h;
  h.computed = r.upper_order;
  if (params.p.inverse() <= kHalf) {
    const double v = base + 0.5 - inv_p;
    h.expected = {v, v, v};
  } else {
    h.expected = {base, base - inv_p + 0.5, base};
  }
  h.holds = true;
  for (int i = 0; i < 3; ++i) h.holds = h.holds && std::abs(h.computed[i] - h.expected[i]) <= 1e-9;
  h.strict_gap = params.p.inverse() > kHalf && h.computed[1] < h.computed[0];
  return h;
}

GeometricBounds geometric_bounds(const EmbeddingParams& params, const SpectrumCurve& curve,
                                 const DimensionEstimate& dims) {
  if (params.q.is_infinite()) throw DomainError("geometric bounds need q < inf");
  GeometricBounds g;
  const double inv_q = to_double(params.q.inverse());
  g.neg_S_upper = -upper_S(curve, dims, params);
  g.box_bound = dims.window_max > 0 ? -params.rho_hat() / dims.window_max - inv_q : -kInf;
  g.ambient_bound = -params.rho_hat() / params.m - inv_q;
  g.first_holds = g.neg_S_upper <= g.box_bound + 1e-9;
  g.second_holds = g.box_bound <= g.ambient_bound + 1e-12;
  return g;
}

}  // namespace widthlab
