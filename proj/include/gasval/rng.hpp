#pragma once

#include <cstdint>
#include <random>

namespace gasval {

// Deterministic substream: same (seed, path, tag) always yields the same draws.
// Paths own independent streams so path loops can run in any order.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t path, std::uint64_t tag) {
        std::seed_seq seq{seed, path, tag};
        gen_.seed(seq);
    }

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }

    int poisson(double mean) {
        std::poisson_distribution<int> dist(mean);
        return dist(gen_);
    }

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

namespace rng_tag {
inline constexpr std::uint64_t curve = 1;
inline constexpr std::uint64_t spot = 2;
inline constexpr std::uint64_t spike_pos = 3;
inline constexpr std::uint64_t spike_neg = 4;
inline constexpr std::uint64_t family = 5;
} // namespace rng_tag

} // namespace gasval
