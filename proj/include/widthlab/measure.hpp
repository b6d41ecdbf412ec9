#pragma once

// Probability measures on (0,1]^m whose dyadic-cube masses are exactly
// computable: dyadically aligned self-similar measures, finite atomic
// measures, normalized Lebesgue measure on a dyadic cube, and products of
// one-dimensional models.

#include "widthlab/dyadic.hpp"
#include "widthlab/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace widthlab {

struct ComputeLimits {
  std::uint64_t max_cubes = std::uint64_t{1} << 24;
  std::uint64_t max_cells = std::uint64_t{1} << 22;
  unsigned threads = 1;
};

/// Similarity x -> 2^-k (x + offset), whose image is the level-k cube `offset`.
struct IfsMap {
  unsigned ratio_log2 = 1;
  std::vector<std::uint64_t> offset;
};

/// Places the whole attractor inside the level-`level` cube `offset`.
struct EmbedShift {
  unsigned level = 0;
  std::vector<std::uint64_t> offset;
};

struct IfsModel {
  std::vector<IfsMap> maps;
  std::vector<Rational> probs;
  std::optional<EmbedShift> embed;

  bool common_ratio() const;
};

struct AtomicModel {
  std::vector<std::vector<Rational>> points;
  std::vector<Rational> weights;
};

struct UniformModel {
  DyadicCube support;
};

class MeasureModel;

struct ProductModel {
  std::vector<std::shared_ptr<const MeasureModel>> factors;
};

class MeasureModel {
 public:
  using Variant = std::variant<IfsModel, AtomicModel, UniformModel, ProductModel>;

  /// Validates every invariant; throws ValidationError naming the first violation.
  MeasureModel(unsigned dim, Variant variant, std::optional<Rational> ahlfors = std::nullopt);

  unsigned dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&variant_);
  }

  /// Declared Ahlfors-regular dimension s (spectrum (1-t)s), if any.
  const std::optional<Rational>& ahlfors() const { return ahlfors_; }

  /// Finite support: asymptotic formulas degenerate (all dimensions are 0).
  bool finite_support() const;

  std::string kind() const;

 private:
  unsigned dim_;
  Variant variant_;
  std::optional<Rational> ahlfors_;
};

/// nu(Q), exact.
Rational mass(const MeasureModel& model, const DyadicCube& cube);

struct CubeMass {
  DyadicCube cube;
  Rational mass;
};

/// All level-n cubes of positive mass with their masses, in canonical order.
/// Zero-mass subtrees are never visited.
std::vector<CubeMass> enumerate_positive(const MeasureModel& model, unsigned level,
                                         const ComputeLimits& limits = {});

/// The multiset of positive level-n masses, as (mass, multiplicity) sorted by
/// decreasing mass. Computed without listing the cubes when the model allows.
struct MassClass {
  Rational mass;
  std::uint64_t count = 0;
};
using LevelDistribution = std::vector<MassClass>;

LevelDistribution level_distribution(const MeasureModel& model, unsigned level,
                                     const ComputeLimits& limits = {});

/// Groups an explicit enumeration into a distribution.
LevelDistribution group_masses(const std::vector<CubeMass>& cubes);

std::uint64_t cardinality(const LevelDistribution& dist);

MeasureModel load_measure(std::istream& in);
MeasureModel load_measure_text(const std::string& text);
MeasureModel load_measure_file(const std::string& path);

/// Rows of m decimal coordinates, optionally followed by a positive weight
/// column. A non-numeric first row is taken as a header.
MeasureModel ingest_points(std::istream& in, unsigned dim, bool weight_column);

/// Round trip to the measure-spec JSON document.
std::string measure_to_json(const MeasureModel& model);

}  // namespace widthlab
