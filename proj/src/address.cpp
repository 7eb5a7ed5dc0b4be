#include "sgwalk/address.hpp"

#include <cmath>
#include <stdexcept>

namespace sg {

namespace {

constexpr std::array<WordCode, Word::kMaxLength + 1> make_pow3() {
  std::array<WordCode, Word::kMaxLength + 1> table{};
  table[0] = 1;
  for (int i = 1; i <= Word::kMaxLength; ++i) table[i] = table[i - 1] * 3;
  return table;
}

constexpr auto kPow3 = make_pow3();

// Lattice coordinates of the three gasket corners in the basis {p1, p2}.
constexpr std::int64_t kCornerA[3] = {0, 1, 0};
constexpr std::int64_t kCornerB[3] = {0, 0, 1};

}  // namespace

WordCode pow3(int exponent) {
  if (exponent < 0 || exponent > Word::kMaxLength) throw std::out_of_range("pow3: exponent out of range");
  return kPow3[exponent];
}

Word Word::parse(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxLength)) throw std::invalid_argument("word longer than 80 letters");
  WordCode code = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '2') throw std::invalid_argument("word letters must be 0, 1 or 2: \"" + std::string(text) + "\"");
    code = code * 3 + static_cast<WordCode>(ch - '0');
  }
  return Word(static_cast<int>(text.size()), code);
}

Word Word::from_code(int length, WordCode code) {
  if (length < 0 || length > kMaxLength) throw std::invalid_argument("word length out of range");
  if (code >= kPow3[length]) throw std::invalid_argument("word code exceeds 3^length");
  return Word(length, code);
}

Word Word::repeated(int digit, int length) {
  if (digit < 0 || digit > 2) throw std::invalid_argument("digit must be 0, 1 or 2");
  if (length < 0 || length > kMaxLength) throw std::invalid_argument("word length out of range");
  // d * (3^n - 1) / 2
  return Word(length, static_cast<WordCode>(digit) * ((kPow3[length] - 1) / 2));
}

std::uint64_t Word::index() const {
  if (length_ > 40) throw std::out_of_range("word too long for a 64-bit index");
  return static_cast<std::uint64_t>(code_);
}

int Word::letter(int i) const {
  if (i < 0 || i >= length_) throw std::out_of_range("letter index out of range");
  return static_cast<int>((code_ / kPow3[length_ - 1 - i]) % 3);
}

Word Word::parent() const {
  if (length_ == 0) throw std::logic_error("the root has no parent");
  return Word(length_ - 1, code_ / 3);
}

Word Word::child(int digit) const {
  if (digit < 0 || digit > 2) throw std::invalid_argument("digit must be 0, 1 or 2");
  if (length_ >= kMaxLength) throw std::length_error("word capacity exceeded");
  return Word(length_ + 1, code_ * 3 + static_cast<WordCode>(digit));
}

Word Word::prefix(int n) const {
  if (n < 0 || n > length_) throw std::out_of_range("prefix length out of range");
  return Word(n, code_ / kPow3[length_ - n]);
}

Word Word::concat(const Word& tail) const {
  if (length_ + tail.length_ > kMaxLength) throw std::length_error("word capacity exceeded");
  return Word(length_ + tail.length_, code_ * kPow3[tail.length_] + tail.code_);
}

bool Word::is_prefix_of(const Word& other) const {
  return length_ <= other.length_ && other.code_ / kPow3[other.length_ - length_] == code_;
}

bool Word::is_constant() const {
  if (length_ == 0) return true;
  return code_ == repeated(last(), length_).code_;
}

std::string Word::to_string() const {
  std::string out(length_, '0');
  WordCode c = code_;
  for (int i = length_ - 1; i >= 0; --i) {
    out[i] = static_cast<char>('0' + static_cast<int>(c % 3));
    c /= 3;
  }
  return out;
}

LatticePoint::LatticePoint(std::int64_t a, std::int64_t b, int level) : a_(a), b_(b), level_(level) {
  if (level < 0 || level > 62) throw std::invalid_argument("lattice level out of range");
  while (level_ > 0 && a_ % 2 == 0 && b_ % 2 == 0) {
    a_ /= 2;
    b_ /= 2;
    --level_;
  }
}

Eigen::Vector2d LatticePoint::to_plane() const {
  const double scale = std::ldexp(1.0, -level_);
  return {(static_cast<double>(a_) + 0.5 * static_cast<double>(b_)) * scale,
          static_cast<double>(b_) * (std::sqrt(3.0) / 2.0) * scale};
}

std::string LatticePoint::to_string() const {
  const std::string den = "/2^" + std::to_string(level_);
  return std::to_string(a_) + den + "," + std::to_string(b_) + den;
}

bool LatticePoint::in_unit_triangle() const {
  return a_ >= 0 && b_ >= 0 && a_ + b_ <= (std::int64_t{1} << level_);
}

std::array<std::int64_t, 2> cell_origin(const Word& w) {
  if (w.length() > 62) throw std::out_of_range("cell depth exceeds exact lattice range");
  std::int64_t a = 0;
  std::int64_t b = 0;
  for (int i = 0; i < w.length(); ++i) {
    const int d = w.letter(i);
    a = 2 * a + kCornerA[d];
    b = 2 * b + kCornerB[d];
  }
  return {a, b};
}

LatticePoint vertex_point(const Word& w) {
  if (w.is_root()) throw std::invalid_argument("the root word has no vertex point");
  const auto [a, b] = cell_origin(w);
  const int d = w.last();
  return LatticePoint(a + kCornerA[d], b + kCornerB[d], w.length());
}

std::array<LatticePoint, 3> cell_vertices(const Word& w) {
  const auto [a, b] = cell_origin(w);
  const int n = w.length();
  return {LatticePoint(a, b, n), LatticePoint(a + 1, b, n), LatticePoint(a, b + 1, n)};
}

Eigen::Vector2d cell_barycenter(const Word& w) {
  const auto [a, b] = cell_origin(w);
  const double scale = std::ldexp(1.0, -w.length());
  const double la = (static_cast<double>(a) + 1.0 / 3.0) * scale;
  const double lb = (static_cast<double>(b) + 1.0 / 3.0) * scale;
  return {la + 0.5 * lb, lb * (std::sqrt(3.0) / 2.0)};
}

LatticePoint boundary_point(const Word& prefix, int depth) {
  if (depth < 1) throw std::invalid_argument("boundary depth must be at least 1");
  if (prefix.length() < depth) throw std::invalid_argument("prefix shorter than requested depth");
  return vertex_point(prefix.prefix(depth));
}

Eigen::Vector2d contract(int digit, const Eigen::Vector2d& x) {
  static const Eigen::Vector2d corners[3] = {
      {0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  return 0.5 * (x + corners[digit]);
}

std::uint64_t level_vertex_count(int n) {
  if (n < 1 || n > 40) throw std::out_of_range("level out of range");
  return static_cast<std::uint64_t>((kPow3[n] + 3) / 2);
}

}  // namespace sg
