#pragma once

#include <cstdint>
#include <random>

namespace maggeo {

// Deterministic RNG wrapper. std::uniform_real_distribution is
// implementation-defined, so the [0,1) mapping is done by hand to keep
// seeded runs byte-identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, m)
  std::uint64_t below(std::uint64_t m) { return gen_() % m; }

private:
  std::mt19937_64 gen_;
};

} // namespace maggeo
