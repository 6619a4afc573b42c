#pragma once

#include <cstdint>
#include <random>

#include "kelvsim/linalg.hpp"

namespace kelvsim {

// Seeded generator with hand-rolled distributions: std:: distributions are
// implementation-defined, these draws are stable across platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Vec3 vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

    // Nonzero vector with |x| in [0.2, hi).
    Vec3 nonzero_vec3(double hi = 2.0) {
        for (;;) {
            const Vec3 v = vec3(-hi, hi);
            const double n = norm(v);
            if (n >= 0.2 && n < hi * 2.0) return v;
        }
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace kelvsim
