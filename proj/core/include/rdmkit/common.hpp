#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rdmkit {

using Complex = std::complex<double>;

/// Hard cap on the spin-orbital count; keeps every sector dense-diagonalizable.
inline constexpr int kMaxOrbitals = 16;

/// Coefficients below this magnitude are dropped from operator polynomials.
inline constexpr double kCoeffPruneTol = 1e-14;

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

inline void require_orbital_count(int r) {
  if (r < 1 || r > kMaxOrbitals)
    throw std::domain_error("orbital count r must be in [1, 16], got " + std::to_string(r));
}

/// Index map for the antisymmetric pair basis {(j,k) : j < k}, lexicographic.
class PairBasis {
 public:
  explicit PairBasis(int r) : r_(r) {
    index_.assign(static_cast<std::size_t>(r) * r, -1);
    for (int j = 0; j < r; ++j)
      for (int k = j + 1; k < r; ++k) {
        index_[static_cast<std::size_t>(j) * r + k] = static_cast<int>(pairs_.size());
        pairs_.emplace_back(j, k);
      }
  }

  int r() const { return r_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  std::pair<int, int> pair(int idx) const { return pairs_[static_cast<std::size_t>(idx)]; }

  /// Index of the ordered pair j < k.
  int index(int j, int k) const { return index_[static_cast<std::size_t>(j) * r_ + k]; }

  /// Index of an arbitrary distinct pair together with the antisymmetry sign.
  std::pair<int, int> signed_index(int j, int k) const {
    if (j < k) return {index(j, k), +1};
    return {index(k, j), -1};
  }

 private:
  int r_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> index_;
};

/// Index map for strictly increasing p-tuples over r orbitals, lexicographic.
class TupleBasis {
 public:
  TupleBasis(int r, int p) : r_(r), p_(p) {
    std::vector<int> t(p);
    build(t, 0, 0);
  }

  int r() const { return r_; }
  int order() const { return p_; }
  int size() const { return static_cast<int>(tuples_.size()); }
  const std::vector<int>& tuple(int idx) const { return tuples_[static_cast<std::size_t>(idx)]; }

  /// Index of a strictly increasing tuple; -1 if not found.
  int index(const std::vector<int>& t) const {
    int lo = 0, hi = size();
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (tuples_[static_cast<std::size_t>(mid)] < t)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size() && tuples_[static_cast<std::size_t>(lo)] == t) return lo;
    return -1;
  }

 private:
  void build(std::vector<int>& t, int pos, int start) {
    if (pos == p_) {
      tuples_.push_back(t);
      return;
    }
    for (int v = start; v <= r_ - (p_ - pos); ++v) {
      t[static_cast<std::size_t>(pos)] = v;
      build(t, pos + 1, v + 1);
    }
  }

  int r_;
  int p_;
  std::vector<std::vector<int>> tuples_;
};

}  // namespace rdmkit
