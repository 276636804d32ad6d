#pragma once

#include <random>
#include <vector>

#include "varstab/matrix.hpp"

namespace testsupport {

using varstab::Rational;
using varstab::Vec;

inline Rational rand_rat(std::mt19937_64& rng, long lo, long hi, long max_den = 1) {
  std::uniform_int_distribution<long> num(lo * max_den, hi * max_den);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rational(num(rng), den(rng));
}

inline Vec rand_vec(std::mt19937_64& rng, std::size_t n, long lo = -3, long hi = 3) {
  Vec v(n);
  for (auto& x : v) x = rand_rat(rng, lo, hi);
  return v;
}

inline Vec rand_nonzero_vec(std::mt19937_64& rng, std::size_t n, long lo = -3, long hi = 3) {
  for (;;) {
    Vec v = rand_vec(rng, n, lo, hi);
    if (!varstab::is_zero(v)) return v;
  }
}

/// All k-subsets of {0..n-1}.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace testsupport
