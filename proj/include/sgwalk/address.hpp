#pragma once

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace sg {

/// Packed base-3 digit string. 128 bits hold up to 80 ternary digits.
using WordCode = unsigned __int128;

/// Power of three as a word code; valid for exponents up to Word::kMaxLength.
WordCode pow3(int exponent);

/// A finite address over {0,1,2}. The empty word is the root of the tree.
///
/// The length is stored explicitly, so "0", "00" and "000" are distinct
/// words even though their packed codes coincide.
class Word {
 public:
  static constexpr int kMaxLength = 80;

  Word() = default;

  /// Parses an ASCII digit string ("" is the root). Throws std::invalid_argument.
  static Word parse(std::string_view text);
  /// Word of the given length whose base-3 value is `code`.
  static Word from_code(int length, WordCode code);
  /// The constant word d^length.
  static Word repeated(int digit, int length);

  int length() const { return length_; }
  bool is_root() const { return length_ == 0; }
  WordCode code() const { return code_; }
  /// Code as a 64-bit index; requires length() <= 40.
  std::uint64_t index() const;

  /// Letter at 0-based position i, counted from the front.
  int letter(int i) const;
  int last() const { return static_cast<int>(code_ % 3); }

  Word parent() const;
  Word child(int digit) const;
  Word prefix(int n) const;
  /// Appends the letters of `tail`.
  Word concat(const Word& tail) const;
  /// True when this word is a (non-strict) prefix of `other`.
  bool is_prefix_of(const Word& other) const;
  /// True when every letter is the same (the three corner rays of the gasket).
  bool is_constant() const;

  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& lhs, const Word& rhs) {
    if (auto c = lhs.length_ <=> rhs.length_; c != 0) return c;
    return lhs.code_ <=> rhs.code_;
  }

 private:
  Word(int length, WordCode code) : code_(code), length_(static_cast<std::uint8_t>(length)) {}

  WordCode code_ = 0;
  std::uint8_t length_ = 0;
};

/// Exact gasket point (a * p1 + b * p2) / 2^level, with p1 = (1,0) and
/// p2 = (1/2, sqrt(3)/2). Always stored in reduced form: level is minimal,
/// so structural equality is point equality.
class LatticePoint {
 public:
  LatticePoint() = default;
  LatticePoint(std::int64_t a, std::int64_t b, int level);

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  int level() const { return level_; }

  /// Cartesian coordinates in the plane.
  Eigen::Vector2d to_plane() const;
  /// "a/2^n,b/2^n"
  std::string to_string() const;

  /// True when the point lies in the closed unit triangle.
  bool in_unit_triangle() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::int64_t a_ = 0;
  std::int64_t b_ = 0;
  int level_ = 0;
};

/// p_w = f_{w_1..w_{n-1}}(p_{w_n}), the image of the word under the level map.
/// Throws std::invalid_argument for the root.
LatticePoint vertex_point(const Word& w);

/// The three corners f_w(p_0), f_w(p_1), f_w(p_2) of the cell K_w.
std::array<LatticePoint, 3> cell_vertices(const Word& w);

/// Integer origin of K_w in lattice units of 2^-|w|; the corners are
/// origin, origin + (1,0) and origin + (0,1) at that scale.
std::array<std::int64_t, 2> cell_origin(const Word& w);

/// Cell barycenter in the plane.
Eigen::Vector2d cell_barycenter(const Word& w);

/// Corner approximation of the boundary point with the given infinite-word
/// prefix, truncated at `depth` letters. The error is at most 2^-depth.
LatticePoint boundary_point(const Word& prefix, int depth);

/// Images of a plane point under the three contractions f_i(x) = (x + p_i) / 2.
Eigen::Vector2d contract(int digit, const Eigen::Vector2d& x);

/// Number of distinct points p_w over words of length n, (3^n + 3) / 2.
std::uint64_t level_vertex_count(int n);

}  // namespace sg

template <>
struct std::hash<sg::Word> {
  std::size_t operator()(const sg::Word& w) const noexcept {
    const auto lo = static_cast<std::uint64_t>(w.code());
    const auto hi = static_cast<std::uint64_t>(w.code() >> 64);
    std::size_t h = std::hash<std::uint64_t>{}(lo ^ (hi * 0x9E3779B97F4A7C15ull));
    return h ^ (static_cast<std::size_t>(w.length()) << 56);
  }
};
