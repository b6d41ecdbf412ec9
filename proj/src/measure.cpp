#include "widthlab/measure.hpp"

#include "parallel.hpp"
#include "widthlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace widthlab {

using json = nlohmann::json;

namespace {

bool inside_axis_prefix(const std::vector<std::uint64_t>& idx, unsigned shift,
                        const std::vector<std::uint64_t>& prefix) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if ((idx[i] >> shift) != prefix[i]) return false;
  }
  return true;
}

// Mass of the level-`level` cube `idx` under the (un-embedded) attractor measure.
// Walks down the unique chain of first-generation images containing the cube;
// once the cube is coarser than the remaining images it collects the
// probabilities of the images it contains.
Rational ifs_mass(const IfsModel& f, unsigned level, std::vector<std::uint64_t> idx) {
  Rational factor = 1;
  while (level > 0) {
    bool descended = false;
    Rational covered = 0;
    for (std::size_t i = 0; i < f.maps.size(); ++i) {
      const auto& map = f.maps[i];
      if (level >= map.ratio_log2) {
        const unsigned shift = level - map.ratio_log2;
        if (!inside_axis_prefix(idx, shift, map.offset)) continue;
        for (std::size_t a = 0; a < idx.size(); ++a) idx[a] -= map.offset[a] << shift;
        level = shift;
        factor *= f.probs[i];
        descended = true;
        break;
      }
      bool contains_image = true;
      const unsigned shift = map.ratio_log2 - level;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        if ((map.offset[a] >> shift) != idx[a]) {
          contains_image = false;
          break;
        }
      }
      if (contains_image) covered += f.probs[i];
    }
    if (!descended) return factor * covered;
  }
  return factor;
}

Rational embedded_ifs_mass(const IfsModel& f, const DyadicCube& cube) {
  if (!f.embed) return ifs_mass(f, cube.level(), cube.index());
  const auto& e = *f.embed;
  if (cube.level() < e.level) {
    const unsigned shift = e.level - cube.level();
    for (unsigned a = 0; a < cube.dim(); ++a) {
      if ((e.offset[a] >> shift) != cube.index(a)) return 0;
    }
    return 1;
  }
  const unsigned shift = cube.level() - e.level;
  if (!inside_axis_prefix(cube.index(), shift, e.offset)) return 0;
  std::vector<std::uint64_t> idx = cube.index();
  for (std::size_t a = 0; a < idx.size(); ++a) idx[a] -= e.offset[a] << shift;
  return ifs_mass(f, shift, std::move(idx));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void check_cube_index(const std::vector<std::uint64_t>& offset, unsigned dim, unsigned level,
                      const std::string& what) {
  require(offset.size() == dim, what + ": offset has " + std::to_string(offset.size()) +
                                    " coordinates, expected " + std::to_string(dim));
  require(level <= kMaxLevel, what + ": level too deep");
  for (auto o : offset) require(o < (std::uint64_t{1} << level), what + ": offset outside the unit cube");
}

void validate_ifs(const IfsModel& f, unsigned dim) {
  require(!f.maps.empty(), "ifs: at least one map required");
  require(f.maps.size() == f.probs.size(), "ifs: probs and maps differ in length");
  Rational total = 0;
  for (const auto& p : f.probs) {
    require(p > 0, "ifs: probabilities must be positive");
    total += p;
  }
  require(total == 1, "ifs: probabilities must sum to 1 (sum is " + to_string(total) + ")");
  std::vector<DyadicCube> images;
  for (const auto& map : f.maps) {
    require(map.ratio_log2 >= 1, "ifs: ratio_log2 must be a positive integer");
    check_cube_index(map.offset, dim, map.ratio_log2, "ifs map");
    images.emplace_back(map.ratio_log2, map.offset);
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      require(!images[i].contains(images[j]) && !images[j].contains(images[i]),
              "ifs: image cubes must be pairwise disjoint (maps " + std::to_string(i) + " and " +
                  std::to_string(j) + " overlap)");
    }
  }
  if (f.embed) check_cube_index(f.embed->offset, dim, f.embed->level, "embed_shift");
}

void validate_atomic(const AtomicModel& a, unsigned dim) {
  require(!a.points.empty(), "atomic: at least one point required");
  require(a.points.size() == a.weights.size(), "atomic: points and weights differ in length");
  Rational total = 0;
  for (const auto& w : a.weights) {
    require(w > 0, "atomic: weights must be positive");
    total += w;
  }
  require(total == 1, "atomic: weights must sum to 1 (sum is " + to_string(total) + ")");
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    require(a.points[i].size() == dim, "atomic: point " + std::to_string(i) + " has wrong dimension");
    for (const auto& x : a.points[i]) {
      require(x > 0 && x < 1, "atomic: point " + std::to_string(i) +
                                  " must lie in the open unit cube (boundary points are not allowed)");
    }
  }
}

}  // namespace

bool IfsModel::common_ratio() const {
  return std::all_of(maps.begin(), maps.end(),
                     [&](const IfsMap& m) { return m.ratio_log2 == maps.front().ratio_log2; });
}

MeasureModel::MeasureModel(unsigned dim, Variant variant, std::optional<Rational> ahlfors)
    : dim_(dim), variant_(std::move(variant)), ahlfors_(std::move(ahlfors)) {
  require(dim_ >= 1, "dimension m must be at least 1");
  if (const auto* f = as<IfsModel>()) {
    validate_ifs(*f, dim_);
  } else if (const auto* a = as<AtomicModel>()) {
    validate_atomic(*a, dim_);
  } else if (const auto* u = as<UniformModel>()) {
    require(u->support.dim() == dim_, "uniform: support dimension differs from m");
  } else if (const auto* p = as<ProductModel>()) {
    require(p->factors.size() == dim_, "product: number of factors must equal m");
    for (const auto& f : p->factors) {
      require(f != nullptr && f->dim() == 1, "product: every factor must be one-dimensional");
    }
  }
  if (ahlfors_) require(*ahlfors_ >= 0 && *ahlfors_ <= dim_, "ahlfors: dimension must lie in [0, m]");
}

bool MeasureModel::finite_support() const {
  if (as<AtomicModel>()) return true;
  if (const auto* p = as<ProductModel>()) {
    return std::all_of(p->factors.begin(), p->factors.end(), [](const auto& f) { return f->finite_support(); });
  }
  if (const auto* f = as<IfsModel>()) return f->maps.size() == 1;
  return false;
}

std::string MeasureModel::kind() const {
  static const char* names[] = {"ifs", "atomic", "uniform", "product"};
  return names[variant_.index()];
}

Rational mass(const MeasureModel& model, const DyadicCube& cube) {
  if (cube.dim() != model.dim()) throw DomainError("cube dimension differs from the measure's");
  if (const auto* f = model.as<IfsModel>()) return embedded_ifs_mass(*f, cube);
  if (const auto* a = model.as<AtomicModel>()) {
    Rational total = 0;
    for (std::size_t i = 0; i < a->points.size(); ++i) {
      if (cube.contains_point(a->points[i])) total += a->weights[i];
    }
    return total;
  }
  if (const auto* u = model.as<UniformModel>()) {
    const auto& s = u->support;
    if (s.contains(cube)) return pow2_neg((cube.level() - s.level()) * cube.dim());
    if (cube.contains(s)) return 1;
    return 0;
  }
  const auto& p = std::get<ProductModel>(model.variant());
  Rational total = 1;
  for (unsigned i = 0; i < model.dim(); ++i) {
    total *= mass(*p.factors[i], DyadicCube(cube.level(), {cube.index(i)}));
    if (total == 0) break;
  }
  return total;
}

namespace {

void check_cap(std::uint64_t count, const ComputeLimits& limits) {
  if (count > limits.max_cubes) {
    throw ResourceError("positive-mass cube count " + std::to_string(count) + " exceeds the cap " +
                        std::to_string(limits.max_cubes));
  }
}

std::vector<CubeMass> enumerate_by_descent(const MeasureModel& model, unsigned level,
                                           const ComputeLimits& limits) {
  std::vector<CubeMass> frontier{{DyadicCube::root(model.dim()), Rational(1)}};
  const unsigned branches = 1u << model.dim();
  for (unsigned n = 0; n < level; ++n) {
    std::vector<std::vector<CubeMass>> slots(frontier.size());
    detail::parallel_chunks(frontier.size(), limits.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        for (unsigned j = 0; j < branches; ++j) {
          DyadicCube c = frontier[i].cube.child(j);
          Rational w = mass(model, c);
          if (w > 0) slots[i].push_back({std::move(c), std::move(w)});
        }
      }
    });
    std::uint64_t total = 0;
    for (const auto& s : slots) total += s.size();
    check_cap(total, limits);
    std::vector<CubeMass> next;
    next.reserve(total);
    for (auto& s : slots) {
      for (auto& cm : s) next.push_back(std::move(cm));
    }
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<CubeMass> enumerate_atomic(const AtomicModel& a, unsigned level) {
  std::map<DyadicCube, Rational> cells;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    cells[cube_containing(a.points[i], level)] += a.weights[i];
  }
  std::vector<CubeMass> out;
  for (auto& [c, w] : cells) out.push_back({c, w});
  return out;
}

std::vector<CubeMass> enumerate_uniform(const UniformModel& u, unsigned level, const ComputeLimits& limits) {
  const auto& s = u.support;
  const unsigned m = s.dim();
  if (level <= s.level()) return {{s.ancestor(level), Rational(1)}};
  const unsigned depth = level - s.level();
  if (static_cast<std::uint64_t>(depth) * m >= 63) check_cap(limits.max_cubes + 1, limits);
  const std::uint64_t per_axis = std::uint64_t{1} << depth;
  const std::uint64_t total = std::uint64_t{1} << (depth * m);
  check_cap(total, limits);
  const Rational w = pow2_neg(depth * m);
  std::vector<CubeMass> out;
  out.reserve(total);
  std::vector<std::uint64_t> idx(m);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rem = code;
    for (unsigned a = m; a-- > 0;) {
      idx[a] = (s.index(a) << depth) + rem % per_axis;
      rem /= per_axis;
    }
    out.push_back({DyadicCube(level, idx), w});
  }
  return out;
}

std::vector<CubeMass> enumerate_product(const ProductModel& p, unsigned level, const ComputeLimits& limits) {
  std::vector<std::vector<CubeMass>> parts;
  std::uint64_t total = 1;
  for (const auto& f : p.factors) {
    parts.push_back(enumerate_positive(*f, level, limits));
    if (__builtin_mul_overflow(total, parts.back().size(), &total)) total = ~std::uint64_t{0};
    check_cap(total, limits);
  }
  std::vector<CubeMass> out;
  out.reserve(total);
  std::vector<std::size_t> pos(parts.size(), 0);
  std::vector<std::uint64_t> idx(parts.size());
  for (std::uint64_t k = 0; k < total; ++k) {
    Rational w = 1;
    for (std::size_t a = 0; a < parts.size(); ++a) {
      idx[a] = parts[a][pos[a]].cube.index(0);
      w *= parts[a][pos[a]].mass;
    }
    out.push_back({DyadicCube(level, idx), std::move(w)});
    for (std::size_t a = parts.size(); a-- > 0;) {
      if (++pos[a] < parts[a].size()) break;
      pos[a] = 0;
    }
  }
  return out;
}

}  // namespace

std::vector<CubeMass> enumerate_positive(const MeasureModel& model, unsigned level, const ComputeLimits& limits) {
  if (level > kMaxLevel) throw ResourceError("level exceeds the supported depth");
  std::vector<CubeMass> out;
  if (const auto* a = model.as<AtomicModel>()) {
    out = enumerate_atomic(*a, level);
  } else if (const auto* u = model.as<UniformModel>()) {
    out = enumerate_uniform(*u, level, limits);
  } else if (const auto* p = model.as<ProductModel>()) {
    out = enumerate_product(*p, level, limits);
  } else {
    out = enumerate_by_descent(model, level, limits);
  }
  check_cap(out.size(), limits);
  std::sort(out.begin(), out.end(), [](const CubeMass& x, const CubeMass& y) { return x.cube < y.cube; });
  return out;
}

namespace {

using MassMap = std::map<Rational, std::uint64_t, std::greater<>>;

LevelDistribution to_distribution(const MassMap& merged) {
  LevelDistribution out;
  out.reserve(merged.size());
  for (const auto& [w, c] : merged) out.push_back({w, c});
  return out;
}

void add_count(MassMap& merged, const Rational& w, std::uint64_t c) {
  auto& slot = merged[w];
  if (__builtin_add_overflow(slot, c, &slot)) throw ResourceError("cube count overflows 64 bits");
}

void check_classes(std::size_t classes, const ComputeLimits& limits) {
  if (classes > limits.max_cubes) throw ResourceError("number of distinct masses exceeds the cap");
}

class IfsDistribution {
 public:
  IfsDistribution(const MeasureModel& model, const IfsModel& f, const ComputeLimits& limits)
      : model_(model), f_(f), limits_(limits) {
    for (const auto& m : f.maps) max_k_ = std::max(max_k_, m.ratio_log2);
  }

  const LevelDistribution& at(unsigned n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    LevelDistribution dist;
    if (n == 0) {
      dist = {{Rational(1), 1}};
    } else if (n < max_k_) {
      // Unembedded attractor at a level coarser than some image: enumerate.
      IfsModel bare = f_;
      bare.embed.reset();
      MeasureModel plain(model_.dim(), bare);
      dist = group_masses(enumerate_positive(plain, n, limits_));
    } else {
      MassMap merged;
      for (std::size_t i = 0; i < f_.maps.size(); ++i) {
        const auto& sub = at(n - f_.maps[i].ratio_log2);
        for (const auto& cls : sub) add_count(merged, f_.probs[i] * cls.mass, cls.count);
        check_classes(merged.size(), limits_);
      }
      dist = to_distribution(merged);
    }
    return memo_.emplace(n, std::move(dist)).first->second;
  }

 private:
  const MeasureModel& model_;
  const IfsModel& f_;
  const ComputeLimits& limits_;
  unsigned max_k_ = 0;
  std::map<unsigned, LevelDistribution> memo_;
};

}  // namespace

LevelDistribution group_masses(const std::vector<CubeMass>& cubes) {
  MassMap merged;
  for (const auto& cm : cubes) {
    if (cm.mass > 0) add_count(merged, cm.mass, 1);
  }
  return to_distribution(merged);
}

std::uint64_t cardinality(const LevelDistribution& dist) {
  std::uint64_t total = 0;
  for (const auto& c : dist) {
    if (__builtin_add_overflow(total, c.count, &total)) throw ResourceError("cube count overflows 64 bits");
  }
  return total;
}

LevelDistribution level_distribution(const MeasureModel& model, unsigned level, const ComputeLimits& limits) {
  if (level > kMaxLevel) throw ResourceError("level exceeds the supported depth");
  if (const auto* f = model.as<IfsModel>()) {
    unsigned shift = f->embed ? f->embed->level : 0;
    if (level < shift) return {{Rational(1), 1}};
    IfsDistribution d(model, *f, limits);
    return d.at(level - shift);
  }
  if (const auto* u = model.as<UniformModel>()) {
    if (level <= u->support.level()) return {{Rational(1), 1}};
    const std::uint64_t bits = std::uint64_t{level - u->support.level()} * model.dim();
    if (bits >= 64) throw ResourceError("cube count overflows 64 bits");
    return {{pow2_neg(static_cast<unsigned>(bits)), std::uint64_t{1} << bits}};
  }
  if (const auto* p = model.as<ProductModel>()) {
    MassMap acc{{Rational(1), 1}};
    for (const auto& factor : p->factors) {
      LevelDistribution fd = level_distribution(*factor, level, limits);
      MassMap next;
      for (const auto& [w, c] : acc) {
        for (const auto& cls : fd) {
          std::uint64_t count = 0;
          if (__builtin_mul_overflow(c, cls.count, &count)) throw ResourceError("cube count overflows 64 bits");
          add_count(next, w * cls.mass, count);
        }
        check_classes(next.size(), limits);
      }
      acc = std::move(next);
    }
    return to_distribution(acc);
  }
  return group_masses(enumerate_positive(model, level, limits));
}

// ---------------------------------------------------------------------------
// Measure-spec documents

namespace {

Rational json_rational(const json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) return rational_from_string(v.get<std::string>());
  throw ParseError(what + ": expected a number or a rational string");
}

std::vector<std::uint64_t> json_index(const json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + ": expected an integer array");
  std::vector<std::uint64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0) throw ParseError(what + ": expected nonnegative integers");
    out.push_back(x.get<std::uint64_t>());
  }
  return out;
}

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("measure spec lacks \"") + key + "\"");
  return doc.at(key);
}

unsigned json_uint(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1'000'000) {
    throw ParseError(what + ": expected a nonnegative integer");
  }
  return v.get<unsigned>();
}

MeasureModel from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("measure spec must be a JSON object");
  const std::string type = field(doc, "type").get<std::string>();
  std::optional<Rational> ahlfors;
  if (doc.contains("ahlfors")) ahlfors = json_rational(doc.at("ahlfors"), "ahlfors");

  if (type == "product") {
    const json& factors = field(doc, "factors");
    if (!factors.is_array() || factors.empty()) throw ParseError("product: factors must be a nonempty array");
    ProductModel p;
    for (const auto& f : factors) p.factors.push_back(std::make_shared<const MeasureModel>(from_json(f)));
    unsigned m = static_cast<unsigned>(p.factors.size());
    if (doc.contains("m") && json_uint(doc.at("m"), "m") != m) {
      throw ValidationError("product: m differs from the number of factors");
    }
    return MeasureModel(m, std::move(p), ahlfors);
  }

  const unsigned m = json_uint(field(doc, "m"), "m");
  if (m == 0 || m > 16) throw ValidationError("dimension m must lie in 1..16");
  if (type == "ifs") {
    IfsModel f;
    const json& maps = field(doc, "maps");
    if (!maps.is_array()) throw ParseError("ifs: maps must be an array");
    for (const auto& mp : maps) {
      f.maps.push_back({json_uint(field(mp, "ratio_log2"), "ratio_log2"), json_index(field(mp, "offset"), "offset")});
    }
    const json& probs = field(doc, "probs");
    if (!probs.is_array()) throw ParseError("ifs: probs must be an array");
    for (const auto& p : probs) f.probs.push_back(json_rational(p, "probs"));
    if (doc.contains("embed_shift")) {
      const json& e = doc.at("embed_shift");
      f.embed = EmbedShift{json_uint(field(e, "level"), "embed_shift.level"), json_index(field(e, "offset"), "embed_shift.offset")};
    }
    return MeasureModel(m, std::move(f), ahlfors);
  }
  if (type == "atomic") {
    AtomicModel a;
    const json& points = field(doc, "points");
    if (!points.is_array()) throw ParseError("atomic: points must be an array");
    for (const auto& pt : points) {
      if (!pt.is_array()) throw ParseError("atomic: each point must be an array");
      std::vector<Rational> coords;
      for (const auto& x : pt) coords.push_back(json_rational(x, "point coordinate"));
      a.points.push_back(std::move(coords));
    }
    const json& weights = field(doc, "weights");
    if (!weights.is_array()) throw ParseError("atomic: weights must be an array");
    for (const auto& w : weights) a.weights.push_back(json_rational(w, "weight"));
    return MeasureModel(m, std::move(a), ahlfors);
  }
  if (type == "uniform") {
    const json& s = field(doc, "support");
    DyadicCube support = s.is_string() ? DyadicCube::parse(s.get<std::string>()) : DyadicCube::root(m);
    if (s.is_string() && support.dim() != m && support.level() == 0 && support.dim() == 1) {
      support = DyadicCube::root(m);  // "0:0" abbreviates the whole cube in any dimension
    }
    return MeasureModel(m, UniformModel{support}, ahlfors);
  }
  throw ParseError("unknown measure type '" + type + "'");
}

json to_json_doc(const MeasureModel& model) {
  json doc;
  doc["type"] = model.kind();
  doc["m"] = model.dim();
  if (const auto* f = model.as<IfsModel>()) {
    doc["maps"] = json::array();
    for (const auto& mp : f->maps) doc["maps"].push_back({{"ratio_log2", mp.ratio_log2}, {"offset", mp.offset}});
    doc["probs"] = json::array();
    for (const auto& p : f->probs) doc["probs"].push_back(to_string(p));
    if (f->embed) doc["embed_shift"] = {{"level", f->embed->level}, {"offset", f->embed->offset}};
  } else if (const auto* a = model.as<AtomicModel>()) {
    doc["points"] = json::array();
    for (const auto& pt : a->points) {
      json row = json::array();
      for (const auto& x : pt) row.push_back(to_string(x));
      doc["points"].push_back(row);
    }
    doc["weights"] = json::array();
    for (const auto& w : a->weights) doc["weights"].push_back(to_string(w));
  } else if (const auto* u = model.as<UniformModel>()) {
    doc["support"] = u->support.to_string();
  } else {
    doc["factors"] = json::array();
    for (const auto& f : std::get<ProductModel>(model.variant()).factors) doc["factors"].push_back(to_json_doc(*f));
  }
  if (model.ahlfors()) doc["ahlfors"] = to_string(*model.ahlfors());
  return doc;
}

}  // namespace

MeasureModel load_measure(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure spec is not valid JSON: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure spec has a field of the wrong type: ") + e.what());
  }
}

MeasureModel load_measure_text(const std::string& text) {
  std::istringstream in(text);
  return load_measure(in);
}

MeasureModel load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read measure spec '" + path + "'");
  return load_measure(in);
}

std::string measure_to_json(const MeasureModel& model) { return to_json_doc(model).dump(); }

MeasureModel ingest_points(std::istream& in, unsigned dim, bool weight_column) {
  if (dim == 0) throw ValidationError("dimension m must be at least 1");
  const std::size_t width = dim + (weight_column ? 1 : 0);
  AtomicModel a;
  std::vector<Rational> raw_weights;
  std::string line;
  std::size_t row = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    std::vector<Rational> values;
    try {
      for (const auto& fcell : fields) values.push_back(rational_from_string(fcell));
    } catch (const ParseError&) {
      if (first_data) {  // header
        first_data = false;
        continue;
      }
      throw ParseError("row " + std::to_string(row) + ": non-numeric field");
    }
    first_data = false;
    if (values.size() != width) {
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(width) + " fields, found " +
                       std::to_string(values.size()));
    }
    std::vector<Rational> point(values.begin(), values.begin() + dim);
    for (const auto& x : point) {
      if (!(x > 0 && x < 1)) {
        throw ValidationError("row " + std::to_string(row) + ": coordinate " + to_string(x) +
                              " is not in the open interval (0,1)");
      }
    }
    if (weight_column) {
      if (!(values.back() > 0)) throw ValidationError("row " + std::to_string(row) + ": weight must be positive");
      raw_weights.push_back(values.back());
    }
    a.points.push_back(std::move(point));
  }
  if (a.points.empty()) throw ParseError("no data rows");
  if (weight_column) {
    Rational total = 0;
    for (const auto& w : raw_weights) total += w;
    for (const auto& w : raw_weights) a.weights.push_back(w / total);
  } else {
    a.weights.assign(a.points.size(), Rational(mpz_class(1), mpz_class(static_cast<unsigned long>(a.points.size()))));
  }
  return MeasureModel(dim, std::move(a));
}

}  // namespace widthlab
