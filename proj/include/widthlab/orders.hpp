#pragma once

// Closed-form approximation orders of the Sobolev embedding W^{sigma,p} into
// L^q(nu) on the unit cube, driven by the L^q-spectrum of nu.

#include "widthlab/coarse.hpp"
#include "widthlab/spectrum.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace widthlab {

/// A Lebesgue exponent r in [1, inf], stored through its exact reciprocal
/// (0 for r = inf) so that the exponent tables are evaluated without rounding.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  static ExtendedReal infinity() { return ExtendedReal(Rational(0)); }
  static ExtendedReal from_reciprocal(Rational inv);
  static ExtendedReal from_rational(const Rational& r);
  /// Accepts "inf", "infinity", rationals "3/2" and decimals.
  static ExtendedReal parse(std::string_view text);
  static ExtendedReal from_double(double r);

  const Rational& inverse() const { return inv_; }
  bool is_infinite() const { return sgn(inv_) == 0; }
  double value() const;
  std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.inv_ == b.inv_; }

 private:
  explicit ExtendedReal(Rational inv) : inv_(std::move(inv)) {}
  Rational inv_ = 1;
};

/// Hoelder conjugate r' with 1' = inf and inf' = 1.
ExtendedReal dual_exponent(const ExtendedReal& r);

enum class WidthType { Kolmogorov = 0, Gelfand = 1, Linear = 2 };
inline constexpr std::array<WidthType, 3> kWidthTypes{WidthType::Kolmogorov, WidthType::Gelfand, WidthType::Linear};
char width_letter(WidthType type);

/// Exponent e with d_n(b_p^{2n}, l_q^{2n}) of order n^e. Every table row whose
/// (closed) condition holds is evaluated and the rows must agree exactly.
Rational width_exponent(WidthType type, const ExtendedReal& p, const ExtendedReal& q);

/// "I" (q<=p), "II" (p<=q<=2), "III" (2<=p<=q), "IV.a" (p<=2<=q<=p'), "IV.b";
/// the first matching region wins on shared boundaries.
std::string case_label(const ExtendedReal& p, const ExtendedReal& q);

struct EmbeddingParams {
  unsigned m = 1;
  unsigned sigma = 1;
  ExtendedReal p;
  ExtendedReal q;

  Rational rho_hat_exact() const;
  double rho_hat() const;
  /// q * rho_hat; infinite when q is.
  double rho() const;
  /// Throws ValidationError unless m, sigma >= 1 and rho_hat > 0.
  void validate() const;
};

/// Sbar = 1/(q s_rho) for q < inf, rho_hat / upper box dimension for q = inf.
double upper_S(const SpectrumCurve& curve, const DimensionEstimate& dims, const EmbeddingParams& params);

/// 1/Sbar = inf{t > 0 : beta(t/q) - t rho_hat <= 0}, solved directly by bisection (q < inf).
double upper_S_by_rescaled_crossing(const SpectrumCurve& curve, const EmbeddingParams& params);

struct OrderReport {
  EmbeddingParams params;
  std::string curve;
  std::string case_label;
  double s_rho = 0;  // NaN for q = inf
  double dim_upper = 0;
  double dim_lower = 0;
  double S_upper = 0;
  double S_upper_check = 0;  // second route; NaN for q = inf
  std::optional<double> S_lower;
  std::array<Rational, 3> exponent;  // K, G, L
  std::array<double, 3> upper_order{};
  std::array<double, 3> lower_lo{};
  std::array<double, 3> lower_hi{};
  bool lower_exact = false;  // q = inf: lower orders are exact values
  bool has_lower = false;
  bool regularity_flag = false;
  double optimized_upper = 0;
  double optimized_lower = 0;

  double upper(WidthType t) const { return upper_order[static_cast<int>(t)]; }
};

/// Upper fields (case label, exponents, Sbar, upper orders).
OrderReport upper_order(const EmbeddingParams& params, const SpectrumCurve& curve, const DimensionEstimate& dims);

/// Adds the lower fields. `coarse` is required when q < inf.
void lower_order(OrderReport& report, const CoarseProfile* coarse, double regularity_tol = 0.05);

struct HilbertCheck {
  std::array<double, 3> computed{};
  std::array<double, 3> expected{};
  bool holds = false;
  bool strict_gap = false;  // p < 2: G strictly below K = L
};

HilbertCheck hilbert_check(const EmbeddingParams& params, const SpectrumCurve& curve, const DimensionEstimate& dims);

struct GeometricBounds {
  double neg_S_upper = 0;
  double box_bound = 0;      // -rho_hat/dim_upper - 1/q
  double ambient_bound = 0;  // -rho_hat/m - 1/q
  bool first_holds = false;
  bool second_holds = false;
};

GeometricBounds geometric_bounds(const EmbeddingParams& params, const SpectrumCurve& curve,
                                 const DimensionEstimate& dims);

}  // namespace widthlab
