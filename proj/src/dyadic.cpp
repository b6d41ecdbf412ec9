#include "widthlab/dyadic.hpp"

#include "widthlab/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace widthlab {

DyadicCube::DyadicCube(unsigned level, std::vector<std::uint64_t> index)
    : level_(level), index_(std::move(index)) {
  if (level_ > kMaxLevel) {
    throw ResourceError("dyadic level " + std::to_string(level_) + " exceeds the supported depth " +
                        std::to_string(kMaxLevel));
  }
  if (index_.empty()) throw ValidationError("dyadic cube needs at least one coordinate");
  const std::uint64_t bound = std::uint64_t{1} << level_;
  for (auto l : index_) {
    if (l >= bound) throw ValidationError("cube index out of range for level " + std::to_string(level_));
  }
}

DyadicCube DyadicCube::root(unsigned dim) { return DyadicCube(0, std::vector<std::uint64_t>(dim, 0)); }

DyadicCube DyadicCube::child(unsigned branch) const {
  const unsigned m = dim();
  if (m < 32 && branch >= (1u << m)) throw DomainError("child number out of range");
  std::vector<std::uint64_t> idx(m);
  for (unsigned i = 0; i < m; ++i) {
    idx[i] = 2 * index_[i] + ((branch >> (m - 1 - i)) & 1u);
  }
  return DyadicCube(level_ + 1, std::move(idx));
}

std::vector<DyadicCube> DyadicCube::children() const {
  const unsigned count = 1u << dim();
  std::vector<DyadicCube> out;
  out.reserve(count);
  for (unsigned j = 0; j < count; ++j) out.push_back(child(j));
  return out;
}

DyadicCube DyadicCube::parent() const {
  if (level_ == 0) throw DomainError("the root cube has no parent");
  return ancestor(level_ - 1);
}

DyadicCube DyadicCube::ancestor(unsigned level) const {
  if (level > level_) throw DomainError("ancestor level below the cube's own level");
  const unsigned shift = level_ - level;
  DyadicCube out = *this;
  out.level_ = level;
  for (auto& l : out.index_) l >>= shift;
  return out;
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.dim() != dim() || other.level_ < level_) return false;
  const unsigned shift = other.level_ - level_;
  for (unsigned i = 0; i < dim(); ++i) {
    if ((other.index_[i] >> shift) != index_[i]) return false;
  }
  return true;
}

bool DyadicCube::contains_point(std::span<const Rational> point) const {
  if (point.size() != dim()) return false;
  const Rational s = side();
  for (unsigned i = 0; i < dim(); ++i) {
    Rational lo = s * static_cast<unsigned long>(index_[i]);
    if (!(point[i] > lo && point[i] <= lo + s)) return false;
  }
  return true;
}

std::vector<Rational> DyadicCube::lower_corner() const {
  const Rational s = side();
  std::vector<Rational> out;
  out.reserve(dim());
  for (auto l : index_) out.emplace_back(s * static_cast<unsigned long>(l));
  return out;
}

std::vector<Rational> DyadicCube::midpoint() const {
  const Rational s = side();
  std::vector<Rational> out;
  out.reserve(dim());
  for (auto l : index_) out.emplace_back(s * static_cast<unsigned long>(l) + s / 2);
  return out;
}

std::vector<double> DyadicCube::midpoint_double() const {
  const double s = std::ldexp(1.0, -static_cast<int>(level_));
  std::vector<double> out;
  out.reserve(dim());
  for (auto l : index_) out.push_back((static_cast<double>(l) + 0.5) * s);
  return out;
}

std::string DyadicCube::to_string() const {
  std::string out = std::to_string(level_) + ":";
  for (unsigned i = 0; i < dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(index_[i]);
  }
  return out;
}

DyadicCube DyadicCube::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("cube '" + std::string(text) + "' lacks ':'");
  auto read_uint = [&](std::string_view part) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw ParseError("bad integer '" + std::string(part) + "' in cube '" + std::string(text) + "'");
    }
    return v;
  };
  std::uint64_t level = read_uint(text.substr(0, colon));
  std::vector<std::uint64_t> idx;
  std::string_view rest = text.substr(colon + 1);
  while (true) {
    auto comma = rest.find(',');
    idx.push_back(read_uint(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (level > kMaxLevel) throw ResourceError("cube level too deep in '" + std::string(text) + "'");
  return DyadicCube(static_cast<unsigned>(level), std::move(idx));
}

std::strong_ordering operator<=>(const DyadicCube& a, const DyadicCube& b) {
  if (auto c = a.level_ <=> b.level_; c != 0) return c;
  return a.index_ <=> b.index_;
}

std::size_t DyadicCubeHash::operator()(const DyadicCube& cube) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ cube.level();
  for (auto l : cube.index()) {
    h ^= l + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

DyadicCube cube_containing(std::span<const Rational> point, unsigned level) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, level);
  std::vector<std::uint64_t> idx;
  idx.reserve(point.size());
  for (const auto& x : point) {
    if (x <= 0 || x > 1) throw DomainError("point outside the unit cube");
    // ceil(x 2^n) - 1 puts a point on a shared face into the lower cube.
    Rational scaled = x * scale;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    c -= 1;
    idx.push_back(c.get_ui());
  }
  return DyadicCube(level, std::move(idx));
}

std::vector<DyadicCube> neighbors(const DyadicCube& cube) {
  const unsigned m = cube.dim();
  const std::uint64_t bound = std::uint64_t{1} << cube.level();
  std::size_t total = 1;
  for (unsigned i = 0; i < m; ++i) total *= 3;
  std::vector<DyadicCube> out;
  std::vector<std::uint64_t> idx(m);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    bool inside = true;
    for (unsigned i = m; i-- > 0;) {
      int offset = static_cast<int>(rem % 3) - 1;
      rem /= 3;
      std::uint64_t l = cube.index(i);
      if ((offset < 0 && l == 0) || (offset > 0 && l + 1 >= bound)) {
        inside = false;
        break;
      }
      idx[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(l) + offset);
    }
    if (inside) out.emplace_back(cube.level(), idx);
  }
  return out;
}

std::uint64_t chebyshev_distance(const DyadicCube& a, const DyadicCube& b) {
  if (a.level() != b.level() || a.dim() != b.dim()) {
    throw ValidationError("chebyshev distance needs cubes of one level and dimension");
  }
  std::uint64_t d = 0;
  for (unsigned i = 0; i < a.dim(); ++i) {
    std::uint64_t x = a.index(i), y = b.index(i);
    d = std::max(d, x > y ? x - y : y - x);
  }
  return d;
}

std::vector<Rational> Box::lower() const {
  std::vector<Rational> out;
  for (const auto& c : center) out.emplace_back(c - half_width);
  return out;
}

std::vector<Rational> Box::upper() const {
  std::vector<Rational> out;
  for (const auto& c : center) out.emplace_back(c + half_width);
  return out;
}

bool Box::interiors_disjoint(const Box& other) const {
  if (other.center.size() != center.size()) throw ValidationError("boxes of different dimension");
  Rational reach = half_width + other.half_width;
  for (std::size_t i = 0; i < center.size(); ++i) {
    Rational gap = center[i] - other.center[i];
    if (abs(gap) >= reach) return true;
  }
  return false;
}

bool Box::contains_point(std::span<const double> point) const {
  const double h = half_width.get_d();
  for (std::size_t i = 0; i < center.size(); ++i) {
    const double c = center[i].get_d();
    if (point[i] < c - h || point[i] > c + h) return false;
  }
  return true;
}

Box scaled_box(const DyadicCube& cube, const Rational& r) {
  if (r <= 0) throw DomainError("box scale must be positive");
  return Box{cube.midpoint(), r * cube.side() / 2};
}

}  // namespace widthlab
