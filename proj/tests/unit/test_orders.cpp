#include "doctest.h"
#include "generators.hpp"

#include "widthlab/error.hpp"
#include "widthlab/orders.hpp"

#include <cmath>

using namespace widthlab;

namespace {

ExtendedReal X(const char* s) { return ExtendedReal::parse(s); }

// Width exponents read off the classical region description, in doubles.
double k_oracle(double a, double b) {  // a = 1/p, b = 1/q
  if (b >= a) return b - a;
  if (b >= 0.5) return 0;
  if (a <= 0.5) return b - a;
  return b - 0.5;
}
double g_oracle(double a, double b) {
  if (b >= a) return b - a;
  if (b >= 0.5) return b - a;
  if (a <= 0.5) return 0;
  return 0.5 - a;
}
double l_oracle(double a, double b) {
  if (b >= a) return b - a;
  if (b >= 0.5 || a <= 0.5) return 0;
  return std::max(b - 0.5, 0.5 - a);
}

DimensionEstimate flat_dims(double d) {
  DimensionEstimate e;
  e.window_min = e.window_max = d;
  return e;
}

const MeasureModel& tetra() {
  static const MeasureModel model = load_measure_file(WIDTHLAB_DATA_DIR "/tetrahedron.json");
  return model;
}

EmbeddingParams P(unsigned m, unsigned sigma, const char* p, const char* q) { return {m, sigma, X(p), X(q)}; }

}  // namespace

TEST_CASE("extended reals") {
  CHECK(X("inf").is_infinite());
  CHECK(X("infinity").is_infinite());
  CHECK(X("2").value() == 2.0);
  CHECK(X("3/2").inverse() == Rational(2, 3));
  CHECK(X("1.5") == X("3/2"));
  CHECK(X("inf").to_string() == "inf");
  CHECK(X("4").to_string() == "4");
  CHECK(dual_exponent(X("1")).is_infinite());
  CHECK(dual_exponent(X("inf")) == X("1"));
  CHECK(dual_exponent(X("3")) == X("3/2"));
  CHECK_THROWS_AS(X("0.5"), ValidationError);
  CHECK_THROWS_AS(X("-2"), ValidationError);
  CHECK_THROWS_AS(X("two"), ParseError);
}

TEST_CASE("width exponents against the region description") {
  gen::Rng rng(59);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = gen::exponent(rng), q = gen::exponent(rng);
    const double a = to_double(p.inverse()), b = to_double(q.inverse());
    INFO("p=" << p.to_string() << " q=" << q.to_string());
    CHECK(to_double(width_exponent(WidthType::Kolmogorov, p, q)) == doctest::Approx(k_oracle(a, b)).epsilon(1e-15));
    CHECK(to_double(width_exponent(WidthType::Gelfand, p, q)) == doctest::Approx(g_oracle(a, b)).epsilon(1e-15));
    CHECK(to_double(width_exponent(WidthType::Linear, p, q)) == doctest::Approx(l_oracle(a, b)).epsilon(1e-15));
  }
}

TEST_CASE("width exponent identities hold exactly") {
  gen::Rng rng(61);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = gen::exponent(rng), q = gen::exponent(rng);
    const auto k = width_exponent(WidthType::Kolmogorov, p, q);
    const auto g = width_exponent(WidthType::Gelfand, p, q);
    const auto l = width_exponent(WidthType::Linear, p, q);
    CHECK(l == std::max(k, g));
    CHECK(g == width_exponent(WidthType::Kolmogorov, dual_exponent(q), dual_exponent(p)));
    CHECK(abs(k - g) <= Rational(1, 2));
  }
}

TEST_CASE("case labels") {
  CHECK(case_label(X("2"), X("2")) == "I");
  CHECK(case_label(X("4"), X("2")) == "I");
  CHECK(case_label(X("1"), X("3/2")) == "II");
  CHECK(case_label(X("3"), X("4")) == "III");
  CHECK(case_label(X("3/2"), X("5/2")) == "IV.a");
  CHECK(case_label(X("3/2"), X("6")) == "IV.b");
  CHECK(case_label(X("4/3"), X("inf")) == "IV.b");
  CHECK(case_label(X("1"), X("inf")) == "IV.a");  // q = p' is shared; first region wins
}

TEST_CASE("embedding parameters") {
  const auto e = P(3, 2, "2", "2");
  CHECK(e.rho_hat_exact() == Rational(1, 2));
  CHECK(e.rho() == 1.0);
  CHECK(std::isinf(P(3, 2, "2", "inf").rho()));
  CHECK_THROWS_AS(P(3, 1, "2", "2").validate(), ValidationError);  // 1 - 3/2 < 0
  CHECK_THROWS_AS(P(2, 1, "2", "2").validate(), ValidationError);  // rho_hat = 0
  CHECK_NOTHROW(P(2, 1, "inf", "2").validate());
}

TEST_CASE("Lebesgue recovers the classical rate") {
  for (unsigned m = 1; m <= 3; ++m) {
    const MeasureModel leb(m, UniformModel{DyadicCube::root(m)});
    const auto curve = *closed_form_spectrum(leb);
    for (unsigned sigma = 1; sigma <= 4; ++sigma) {
      EmbeddingParams e = P(m, sigma, "2", "2");
      if (e.rho_hat_exact() <= 0) continue;
      const auto r = upper_order(e, curve, flat_dims(m));
      for (auto t : kWidthTypes) CHECK(r.upper(t) == doctest::Approx(-double(sigma) / m).epsilon(1e-10));
    }
  }
}

TEST_CASE("tetrahedron report") {
  const auto curve = *closed_form_spectrum(tetra());
  const auto r = upper_order(P(3, 2, "2", "2"), curve, flat_dims(2));
  CHECK(r.case_label == "I");
  CHECK(r.S_upper == doctest::Approx(0.847819596311944).epsilon(1e-10));
  CHECK(r.S_upper_check == doctest::Approx(r.S_upper).epsilon(1e-9));
  CHECK(r.upper(WidthType::Kolmogorov) == doctest::Approx(-0.847819596311944).epsilon(1e-10));
}

TEST_CASE("both routes to Sbar agree on random models") {
  gen::Rng rng(67);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 2));
    const auto model = gen::ifs(rng, m, 4, 2, true);
    if (model.finite_support()) continue;
    const auto curve = *closed_form_spectrum(model);
    EmbeddingParams e{m, static_cast<unsigned>(rng.uniform(1, 3)), gen::exponent(rng), gen::exponent(rng)};
    if (e.q.is_infinite() || e.rho_hat_exact() <= 0) continue;
    CHECK(upper_S(curve, flat_dims(curve(0)), e) ==
          doctest::Approx(upper_S_by_rescaled_crossing(curve, e)).epsilon(1e-8));
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("orders are continuous across region boundaries") {
  const auto curve = *closed_form_spectrum(tetra());
  const auto dims = flat_dims(2);
  const double d = 1e-10;
  auto at = [&](double p, double q) {
    return upper_order({3, 3, ExtendedReal::from_double(p), ExtendedReal::from_double(q)}, curve, dims).upper_order;
  };
  const std::vector<std::array<double, 4>> probes = {
      {2 - d, 3, 2 + d, 3},      // p = 2
      {1.5, 2 - d, 1.5, 2 + d},  // q = 2
      {3 - d, 3, 3 + d, 3},      // p = q
      {1.5, 3 - d, 1.5, 3 + d},  // q = p'
  };
  for (const auto& pr : probes) {
    const auto lo = at(pr[0], pr[1]), hi = at(pr[2], pr[3]);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(lo[i] - hi[i]) <= 1e-9);
  }
}

TEST_CASE("q = inf uses box dimensions") {
  const auto curve = *closed_form_spectrum(tetra());
  auto r = upper_order(P(3, 2, "2", "inf"), curve, flat_dims(2));
  CHECK(r.upper(WidthType::Kolmogorov) == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(r.upper(WidthType::Gelfand) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(r.upper(WidthType::Linear) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(std::isnan(r.s_rho));
  lower_order(r, nullptr);
  CHECK(r.lower_exact);
  for (int i = 0; i < 3; ++i) CHECK(r.lower_lo[i] == doctest::Approx(r.upper_order[i]).epsilon(1e-12));

  // p > 2 branch
  auto s = upper_order(P(3, 2, "4", "inf"), curve, flat_dims(2));
  lower_order(s, nullptr);
  const double base = -(2 - 0.75) / 2;
  CHECK(s.lower_lo[0] == doctest::Approx(base - 0.25));
  CHECK(s.lower_lo[1] == doctest::Approx(base));
}

TEST_CASE("lower orders need a coarse profile for finite q") {
  const auto curve = *closed_form_spectrum(tetra());
  auto r = upper_order(P(3, 2, "2", "2"), curve, flat_dims(2));
  CHECK_THROWS_AS(lower_order(r, nullptr), DomainError);
  CoarseProfile prof;
  prof.optimized_upper = 0.59;
  prof.optimized_lower = 0.5;
  lower_order(r, &prof);
  CHECK(r.lower_hi[0] == r.upper_order[0]);
  CHECK(*r.S_lower == doctest::Approx(1.0));
  CHECK(r.lower_lo[0] == doctest::Approx(r.upper_order[0] - (1.0 - r.S_upper)));
}

TEST_CASE("Hilbert-space formulas") {
  const auto curve = *closed_form_spectrum(tetra());
  for (const char* p : {"2", "3", "4", "inf", "3/2"}) {
    const auto h = hilbert_check(P(3, 3, p, "2"), curve, flat_dims(2));
    CHECK(h.holds);
    if (X(p).inverse() > Rational(1, 2)) CHECK(h.strict_gap);
  }
  CHECK_THROWS_AS(hilbert_check(P(3, 2, "2", "3"), curve, flat_dims(2)), DomainError);
}

TEST_CASE("geometric bounds") {
  const auto curve = *closed_form_spectrum(tetra());
  const auto g = geometric_bounds(P(3, 2, "2", "2"), curve, flat_dims(2));
  CHECK(g.neg_S_upper == doctest::Approx(-0.847819596311944));
  CHECK(g.box_bound == doctest::Approx(-0.75));
  CHECK(g.ambient_bound == doctest::Approx(-2.0 / 3));
  CHECK(g.first_holds);
  CHECK(g.second_holds);

  const auto cantor = load_measure_file(WIDTHLAB_DATA_DIR "/quarter_cantor.json");
  const auto c = geometric_bounds(P(1, 1, "2", "2"), *closed_form_spectrum(cantor), flat_dims(0.5));
  CHECK(c.neg_S_upper == doctest::Approx(-1.5));
  CHECK(c.box_bound == doctest::Approx(-1.5));
  CHECK(c.ambient_bound == doctest::Approx(-1.0));
}
