#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spdefield {

// Deterministic random source. The standard distributions are
// implementation-defined, so uniform/normal draws are generated here to keep
// outputs reproducible for a given seed independent of the standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Marsaglia polar method; one spare kept between calls.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Integer in [0, n), n > 0.
  std::size_t below(std::size_t n) {
    auto r = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return r < n ? r : n - 1;
  }

  // Independent stream derived from this seed, e.g. one per replicate.
  Rng fork(std::uint64_t stream) const {
    return Rng(seed_ ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spdefield
