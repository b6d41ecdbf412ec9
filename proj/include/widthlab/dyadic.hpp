#pragma once

// Half-open dyadic cubes  prod_i (l_i 2^-n, (l_i + 1) 2^-n]  of the unit cube
// (0,1]^m, stored as (level, integer index). No floating point is involved in
// any of the geometric predicates.

#include "widthlab/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace widthlab {

/// Deepest representable level; indices must fit below 2^kMaxLevel.
inline constexpr unsigned kMaxLevel = 62;

class DyadicCube {
 public:
  DyadicCube() = default;
  DyadicCube(unsigned level, std::vector<std::uint64_t> index);

  static DyadicCube root(unsigned dim);

  unsigned level() const { return level_; }
  unsigned dim() const { return static_cast<unsigned>(index_.size()); }
  const std::vector<std::uint64_t>& index() const { return index_; }
  std::uint64_t index(unsigned axis) const { return index_[axis]; }

  /// Child number `branch` in lexicographic index order; bit (m-1-i) of
  /// `branch` selects the upper half along axis i.
  DyadicCube child(unsigned branch) const;
  std::vector<DyadicCube> children() const;
  DyadicCube parent() const;

  /// The level-`level` cube containing this one (level <= this->level()).
  DyadicCube ancestor(unsigned level) const;

  /// True when `other` is this cube or one of its descendants.
  bool contains(const DyadicCube& other) const;

  /// Half-open membership: strict lower bound, inclusive upper bound.
  bool contains_point(std::span<const Rational> point) const;

  Rational side() const { return pow2_neg(level_); }
  Rational volume() const { return pow2_neg(level_ * dim()); }
  std::vector<Rational> lower_corner() const;
  std::vector<Rational> midpoint() const;
  std::vector<double> midpoint_double() const;

  /// "n:l1,l2,...,lm"
  std::string to_string() const;
  static DyadicCube parse(std::string_view text);

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
  friend std::strong_ordering operator<=>(const DyadicCube& a, const DyadicCube& b);

 private:
  unsigned level_ = 0;
  std::vector<std::uint64_t> index_;
};

struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube& cube) const noexcept;
};

/// Level-`level` cube containing a point of the open unit cube.
DyadicCube cube_containing(std::span<const Rational> point, unsigned level);

/// All same-level cubes whose closures meet the closure of `cube`,
/// including `cube` itself, in lexicographic order.
std::vector<DyadicCube> neighbors(const DyadicCube& cube);

/// max_i |l_i - l'_i| for two cubes of the same level.
std::uint64_t chebyshev_distance(const DyadicCube& a, const DyadicCube& b);

/// Closed axis-parallel box; may stick out of the unit cube.
struct Box {
  std::vector<Rational> center;
  Rational half_width;

  std::vector<Rational> lower() const;
  std::vector<Rational> upper() const;
  bool interiors_disjoint(const Box& other) const;
  bool contains_point(std::span<const double> point) const;
};

/// Box with the midpoint of `cube` and side r * 2^-level.
Box scaled_box(const DyadicCube& cube, const Rational& r);

}  // namespace widthlab
