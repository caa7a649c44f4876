#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "opcheck/linear_map.hpp"

namespace opcheck {

// Permutations of {0, .., n-1} in one-line notation: images[k] is where
// position k goes. Slots and leaf labels are 0-based everywhere inside the
// library; 1-based numbering exists only at the serialization boundary.

class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
      if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v])
        throw std::invalid_argument("Permutation: images are not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
  }

  /// The adjacent transposition s_k = (k, k+1) in S_n, 0 <= k <= n-2.
  static Permutation adjacent(int n, int k) {
    if (k < 0 || k + 1 >= n)
      throw std::invalid_argument("Permutation::adjacent: index out of range");
    Permutation s = identity(n);
    std::swap(s.images_[k], s.images_[k + 1]);
    return s;
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_.at(k); }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int k = 0; k < degree(); ++k)
      if (images_[k] != k) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int k = 0; k < degree(); ++k) inv[images_[k]] = k;
    return Permutation(std::move(inv));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

  /// Decomposition into adjacent transpositions: *this equals
  /// adjacent(n, w[0]) o adjacent(n, w[1]) o ... applied left to right.
  std::vector<int> adjacent_word() const {
    std::vector<int> v = images_;
    std::vector<int> word;
    bool moved = true;
    while (moved) {
      moved = false;
      for (int k = 0; k + 1 < static_cast<int>(v.size()); ++k)
        if (v[k] > v[k + 1]) {
          std::swap(v[k], v[k + 1]);
          word.push_back(k);
          moved = true;
        }
    }
    std::reverse(word.begin(), word.end());
    return word;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int k = 0; k < degree(); ++k) {
      if (k) s += " ";
      s += std::to_string(images_[k] + 1);
    }
    return s + "]";
  }

 private:
  std::vector<int> images_;
};

/// a o b: first b, then a.
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree())
    throw std::invalid_argument("Permutation compose: degree mismatch");
  std::vector<int> img(a.degree());
  for (int k = 0; k < a.degree(); ++k) img[k] = a(b(k));
  return Permutation(std::move(img));
}

namespace detail {
inline std::vector<Permutation> enumerate_group(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}
}  // namespace detail

/// All of S_n in lexicographic one-line order; the position of a
/// permutation in this list is its canonical rank. Groups up to S_6 are
/// memoized (873 elements total, built once, thread-safe static init).
inline const std::vector<Permutation>& all_permutations(int n) {
  static const std::vector<std::vector<Permutation>> small = [] {
    std::vector<std::vector<Permutation>> tables;
    for (int k = 0; k <= 6; ++k) tables.push_back(detail::enumerate_group(k));
    return tables;
  }();
  if (n < 0) throw std::invalid_argument("all_permutations: negative degree");
  if (n <= 6) return small[n];
  throw std::invalid_argument("all_permutations: degree beyond memoized range");
}

/// Lexicographic rank, computed digit-wise (no table lookup).
inline long permutation_rank(const Permutation& s) {
  const int n = s.degree();
  long fact = 1;
  for (int i = 2; i < n; ++i) fact *= i;
  long r = 0;
  std::vector<bool> used(n, false);
  for (int k = 0; k < n; ++k) {
    int smaller = 0;
    for (int v = 0; v < s(k); ++v)
      if (!used[v]) ++smaller;
    r += smaller * fact;
    used[s(k)] = true;
    if (n - k - 1 > 0) fact /= (n - k - 1);
  }
  return r;
}

/// The action of sigma on (K^d)^{(x) n} sending the tensor factor in slot k
/// to slot sigma(k). This is a left action: the matrix of a composite is
/// the product of the matrices.
template <Field F>
LinearMap<F> perm_on_tensor_power(const F& field, const Permutation& s, int d) {
  const int n = s.degree();
  long size = 1;
  for (int i = 0; i < n; ++i) {
    size *= d;
    if (size > (1L << 26))
      throw budget_error("perm_on_tensor_power: d^n too large");
  }
  Permutation inv = s.inverse();
  LinearMap<F> m(field, static_cast<int>(size), static_cast<int>(size));
  std::vector<int> digits(n, 0);
  for (long col = 0; col < size; ++col) {
    // Column index col encodes (i_0, .., i_{n-1}) big-endian; output
    // position l carries the factor that was at slot inv(l).
    long row = 0;
    for (int l = 0; l < n; ++l) row = row * d + digits[inv(l)];
    m.at(static_cast<int>(row), static_cast<int>(col)) = field.one();
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[k] < d) break;
      digits[k] = 0;
    }
  }
  return m;
}

/// sigma in S_m with slot j replaced by a block of n slots (n may be 0,
/// which deletes the slot and standardizes). The block lands at the
/// positions sigma(j), .., sigma(j)+n-1 in order.
inline Permutation blow_up(const Permutation& sigma, int j, int n) {
  const int m = sigma.degree();
  if (j < 0 || j >= m) throw std::invalid_argument("blow_up: slot out of range");
  if (n < 0) throw std::invalid_argument("blow_up: negative block");
  auto adjust = [&](int x) { return x < sigma(j) ? x : x + n - 1; };
  std::vector<int> img(m + n - 1);
  for (int k = 0; k < j; ++k) img[k] = adjust(sigma(k));
  for (int t = 0; t < n; ++t) img[j + t] = sigma(j) + t;
  for (int k = j + n; k < m + n - 1; ++k) img[k] = adjust(sigma(k - n + 1));
  return Permutation(std::move(img));
}

/// tau in S_n acting inside the block [i, i+n) of {0, .., m+n-2},
/// identity elsewhere.
inline Permutation block_shift(const Permutation& tau, int i, int m) {
  const int n = tau.degree();
  if (i < 0 || i >= m) throw std::invalid_argument("block_shift: slot out of range");
  std::vector<int> img(m + n - 1);
  std::iota(img.begin(), img.end(), 0);
  for (int t = 0; t < n; ++t) img[i + t] = i + tau(t);
  return Permutation(std::move(img));
}

/// (p, q)-shuffles: permutations keeping 0..p-1 and p..p+q-1 in relative
/// order, enumerated by the choice of output positions of the first block
/// (lexicographic).
inline std::vector<Permutation> shuffles(int p, int q) {
  std::vector<Permutation> out;
  const int n = p + q;
  std::vector<int> pos(p);
  std::iota(pos.begin(), pos.end(), 0);
  auto emit = [&]() {
    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    for (int a = 0; a < p; ++a) {
      img[a] = pos[a];
      used[pos[a]] = true;
    }
    int next = 0;
    for (int b = 0; b < q; ++b) {
      while (used[next]) ++next;
      img[p + b] = next;
      used[next] = true;
    }
    out.push_back(Permutation(std::move(img)));
  };
  if (p == 0 || q == 0) {
    out.push_back(Permutation::identity(n));
    return out;
  }
  while (true) {
    emit();
    int a = p - 1;
    while (a >= 0 && pos[a] == n - p + a) --a;
    if (a < 0) break;
    ++pos[a];
    for (int b = a + 1; b < p; ++b) pos[b] = pos[b - 1] + 1;
  }
  return out;
}

}  // namespace opcheck
