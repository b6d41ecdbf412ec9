#include "doctest.h"
#include "generators.hpp"

#include "widthlab/error.hpp"
#include "widthlab/partition.hpp"

#include <cmath>
#include <set>

using namespace widthlab;

namespace {

double log2_j(const Rational& mass, unsigned level, double rho) { return log2_of(mass) - level * rho; }

// The definition read literally: scan every positive-mass cube up to a depth
// and keep those below the threshold whose ancestors are all at or above it.
std::set<DyadicCube> brute_partition(const MeasureModel& model, double rho, double t, unsigned depth) {
  std::set<DyadicCube> out;
  const double lt = std::log2(t);
  for (unsigned n = 0; n <= depth; ++n) {
    for (const auto& c : enumerate_positive(model, n)) {
      if (!(log2_j(c.mass, n, rho) < lt - 1e-12)) continue;
      bool ancestors_ok = true;
      for (unsigned l = 0; l < n && ancestors_ok; ++l) {
        const auto a = c.cube.ancestor(l);
        ancestors_ok = log2_j(mass(model, a), l, rho) >= lt - 1e-12;
      }
      if (ancestors_ok) out.insert(c.cube);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("partition matches the literal definition") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 2));
    const auto model = rng.coin() ? gen::ifs(rng, m, 4, 2) : gen::uniform(rng, m);
    const double rho = rng.real(0.3, 2.0);
    const double t = std::exp2(-rng.real(1.0, 6.0));
    const auto part = build_partition(model, rho, t);
    const auto expected = brute_partition(model, rho, t, part.max_level);
    std::set<DyadicCube> got;
    for (const auto& c : part.cells) got.insert(c.cube);
    INFO("trial " << trial);
    CHECK(got == expected);
    CHECK(part.card == part.cells.size());
  }
}

TEST_CASE("partition cells tile the support") {
  gen::Rng rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 2));
    const auto model = gen::any_model(rng, m);
    const auto part = build_partition(model, rng.real(0.5, 2.0), std::exp2(-rng.real(1.0, 8.0)));
    Rational total = 0;
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
      total += part.cells[i].mass;
      CHECK(part.cells[i].mass > 0);
      for (std::size_t j = i + 1; j < part.cells.size(); ++j) {
        CHECK_FALSE(part.cells[i].cube.contains(part.cells[j].cube));
        CHECK_FALSE(part.cells[j].cube.contains(part.cells[i].cube));
      }
    }
    CHECK(total == 1);
  }
}

TEST_CASE("cardinality is monotone in the threshold") {
  gen::Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = gen::ifs(rng, 1, 3, 2);
    std::size_t prev = 0;
    for (int k = 1; k <= 12; ++k) {
      const auto part = build_partition(model, 1.0, std::exp2(-k));
      CHECK(part.card >= prev);
      prev = part.card;
    }
  }
}

TEST_CASE("quarter Cantor partitions") {
  const auto model = load_measure_file(WIDTHLAB_DATA_DIR "/quarter_cantor.json");
  struct Row {
    int k;
    std::size_t card;
    unsigned level;
  };
  // from the brute-force oracle script
  for (const Row r : {Row{2, 2, 2}, Row{4, 4, 3}, Row{6, 8, 5}, Row{8, 8, 6}}) {
    const auto p = build_partition(model, 1.0, std::exp2(-r.k));
    CHECK(p.card == r.card);
    CHECK(p.min_level == r.level);
    CHECK(p.max_level == r.level);
  }
}

TEST_CASE("threshold at the root") {
  const MeasureModel leb(1, UniformModel{DyadicCube::root(1)});
  const auto p = build_partition(leb, 1.0, 2.0);
  CHECK(p.degenerate);
  CHECK(p.card == 1);
  // J(root) = 1 equals t: met, so the root splits
  CHECK(build_partition(leb, 1.0, 1.0).card == 2);
  CHECK(build_partition(leb, 1.0, 0.25).card == 4);
  CHECK_THROWS_AS(build_partition(leb, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(build_partition(leb, 1.0, -1.0), DomainError);
}

TEST_CASE("cell cap raises a resource error") {
  const MeasureModel leb(2, UniformModel{DyadicCube::root(2)});
  ComputeLimits tight;
  tight.max_cells = 50;
  CHECK_THROWS_AS(build_partition(leb, 1.0, std::exp2(-12), tight), ResourceError);
}

TEST_CASE("thread count does not change the partition") {
  const auto model = load_measure_file(WIDTHLAB_DATA_DIR "/tetrahedron.json");
  ComputeLimits one, four;
  four.threads = 4;
  const auto a = build_partition(model, 2.0, std::exp2(-24), one);
  const auto b = build_partition(model, 2.0, std::exp2(-24), four);
  REQUIRE(a.card == b.card);
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].cube == b.cells[i].cube);
}

TEST_CASE("entropy slopes") {
  const MeasureModel leb(1, UniformModel{DyadicCube::root(1)});
  std::vector<double> ts;
  for (int k = 2; k <= 20; ++k) ts.push_back(std::exp2(-k));
  CHECK(entropy_slope(leb, 1.0, ts).slope == doctest::Approx(0.5).epsilon(0.02));

  const auto cantor = load_measure_file(WIDTHLAB_DATA_DIR "/quarter_cantor.json");
  std::vector<double> cts;
  for (int k = 2; k <= 16; ++k) cts.push_back(std::exp2(-k));
  CHECK(entropy_slope(cantor, 1.0, cts).slope == doctest::Approx(0.339286).epsilon(1e-5));

  std::vector<double> narrow{0.1, 0.05, 0.02};
  CHECK_THROWS_AS(entropy_slope(leb, 1.0, narrow), DomainError);
}

TEST_CASE("least squares recovers a line") {
  std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto [b, a] = least_squares(x, y);
  CHECK(b == doctest::Approx(2.0));
  CHECK(a == doctest::Approx(1.0));
}
