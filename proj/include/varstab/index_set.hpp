#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace varstab {

/// Set of row indices (0-based, at most 64 rows).
class IndexSet {
 public:
  static constexpr std::size_t kMaxRows = 64;

  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> idx) {
    for (auto i : idx) insert(i);
  }
  static IndexSet from_bits(std::uint64_t bits) {
    IndexSet s;
    s.bits_ = bits;
    return s;
  }
  /// {0, ..., n-1}
  static IndexSet range(std::size_t n) {
    check(n == 0 ? 0 : n - 1);
    return from_bits(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  bool contains(std::size_t i) const { return i < kMaxRows && ((bits_ >> i) & 1U); }
  void insert(std::size_t i) {
    check(i);
    bits_ |= std::uint64_t{1} << i;
  }
  void erase(std::size_t i) {
    if (i < kMaxRows) bits_ &= ~(std::uint64_t{1} << i);
  }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  bool subset_of(const IndexSet& o) const { return (bits_ & ~o.bits_) == 0; }

  friend IndexSet operator|(IndexSet a, IndexSet b) { return from_bits(a.bits_ | b.bits_); }
  friend IndexSet operator&(IndexSet a, IndexSet b) { return from_bits(a.bits_ & b.bits_); }
  friend IndexSet operator-(IndexSet a, IndexSet b) { return from_bits(a.bits_ & ~b.bits_); }
  friend bool operator==(IndexSet a, IndexSet b) = default;
  friend std::strong_ordering operator<=>(IndexSet a, IndexSet b) { return a.bits_ <=> b.bits_; }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kMaxRows; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  /// 1-based listing such as "{1,3}".
  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (auto i : elements()) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  static void check(std::size_t i) {
    if (i >= kMaxRows) throw std::out_of_range("IndexSet supports at most 64 rows");
  }
  std::uint64_t bits_ = 0;
};

}  // namespace varstab
