#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace opcheck {

// Exact scalar domains. A field object carries whatever runtime data the
// arithmetic needs (the modulus for F_p, nothing for Q) and exposes value
// semantics on its element type. All arithmetic is exact; there is no
// floating-point mode.

template <typename F>
concept Field = std::regular<typename F::Elt> &&
    requires(const F f, const typename F::Elt a, const std::string s) {
      { f.zero() } -> std::convertible_to<typename F::Elt>;
      { f.one() } -> std::convertible_to<typename F::Elt>;
      { f.from_int(long{}) } -> std::convertible_to<typename F::Elt>;
      { f.add(a, a) } -> std::convertible_to<typename F::Elt>;
      { f.sub(a, a) } -> std::convertible_to<typename F::Elt>;
      { f.mul(a, a) } -> std::convertible_to<typename F::Elt>;
      { f.neg(a) } -> std::convertible_to<typename F::Elt>;
      { f.inv(a) } -> std::convertible_to<typename F::Elt>;
      { f.is_zero(a) } -> std::convertible_to<bool>;
      { f.to_string(a) } -> std::convertible_to<std::string>;
      { f.parse(s) } -> std::convertible_to<typename F::Elt>;
      { f == f } -> std::convertible_to<bool>;
      { f.name() } -> std::convertible_to<std::string>;
    };

/// Arbitrary-precision rationals (GMP-backed).
class RationalField {
 public:
  using Elt = mpq_class;

  Elt zero() const { return Elt(0); }
  Elt one() const { return Elt(1); }
  Elt from_int(long v) const { return Elt(v); }

  Elt add(const Elt& a, const Elt& b) const { return Elt(a + b); }
  Elt sub(const Elt& a, const Elt& b) const { return Elt(a - b); }
  Elt mul(const Elt& a, const Elt& b) const { return Elt(a * b); }
  Elt neg(const Elt& a) const { return Elt(-a); }
  Elt inv(const Elt& a) const {
    if (a == 0) throw std::domain_error("RationalField: inverse of zero");
    return Elt(1 / a);
  }
  bool is_zero(const Elt& a) const { return a == 0; }

  std::string to_string(const Elt& a) const { return a.get_str(); }

  // Accepts "a", "-a" and "a/b"; canonicalizes (GMP does not by itself).
  Elt parse(const std::string& s) const {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
      throw std::invalid_argument("RationalField: bad scalar literal '" + s + "'");
    if (q.get_den() == 0)
      throw std::invalid_argument("RationalField: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }

  std::string name() const { return "Q"; }
  bool operator==(const RationalField&) const { return true; }
};

/// The prime field F_p, p < 2^16. Elements are stored reduced in [0, p).
class PrimeField {
 public:
  using Elt = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p >= (1u << 16) || !small_prime(p))
      throw std::invalid_argument("PrimeField: modulus must be a prime < 2^16");
  }

  std::uint32_t modulus() const { return p_; }

  Elt zero() const { return 0; }
  Elt one() const { return 1 % p_; }
  Elt from_int(long v) const {
    long r = v % static_cast<long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elt>(r);
  }

  Elt add(Elt a, Elt b) const { return (a + b) % p_; }
  Elt sub(Elt a, Elt b) const { return (a + p_ - b) % p_; }
  Elt mul(Elt a, Elt b) const {
    return static_cast<Elt>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Elt neg(Elt a) const { return (p_ - a) % p_; }
  Elt inv(Elt a) const {
    if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
    return pow(a, p_ - 2);
  }
  Elt pow(Elt a, std::uint32_t e) const {
    Elt r = one(), b = a % p_;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  bool is_zero(Elt a) const { return a == 0; }

  std::string to_string(Elt a) const { return std::to_string(a); }

  // Accepts integer literals (possibly negative) and "a/b".
  Elt parse(const std::string& s) const {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      Elt num = parse(s.substr(0, slash));
      Elt den = parse(s.substr(slash + 1));
      return mul(num, inv(den));
    }
    std::size_t pos = 0;
    long v;
    try {
      v = std::stol(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("PrimeField: bad scalar literal '" + s + "'");
    }
    if (pos != s.size())
      throw std::invalid_argument("PrimeField: bad scalar literal '" + s + "'");
    return from_int(v);
  }

  std::string name() const { return "F" + std::to_string(p_); }
  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

  static bool small_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

 private:
  std::uint32_t p_;
};

static_assert(Field<RationalField>);
static_assert(Field<PrimeField>);

/// Raised when a construction or search would exceed its size budget.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opcheck
