#pragma once

#include <cstdint>

#include "opcheck/linear_map.hpp"

// Deterministic pseudo-random scalars and matrices for property tests.
// Fixed multiplier LCG; every test seeds its own stream, so ordering of
// test cases never changes the data.

namespace testutil {

struct Lcg {
  std::uint64_t state;

  explicit Lcg(std::uint64_t seed) : state(seed * 2862933555777941757ULL + 1) {}

  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  }

  // Uniform-ish integer in [0, bound).
  long below(long bound) { return static_cast<long>(next() % bound); }
};

template <opcheck::Field F>
typename F::Elt random_scalar(const F& k, Lcg& rng, long spread = 7) {
  return k.from_int(rng.below(2 * spread + 1) - spread);
}

template <opcheck::Field F>
opcheck::LinearMap<F> random_map(const F& k, Lcg& rng, int cod, int dom,
                                 long spread = 7) {
  opcheck::LinearMap<F> m(k, cod, dom);
  for (int r = 0; r < cod; ++r)
    for (int c = 0; c < dom; ++c) m.at(r, c) = random_scalar(k, rng, spread);
  return m;
}

}  // namespace testutil
