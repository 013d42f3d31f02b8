#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace oddsquant {

/// Deterministic random stream. Transforms are implemented here rather than
/// with std:: distributions, whose output sequences are implementation
/// defined and would not reproduce across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Independent stream for one replication of a Monte Carlo run, so
    /// replications can execute in any order.
    static Rng for_replication(std::uint64_t root_seed, std::uint64_t replication);

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal via Box-Muller (second value cached).
    double normal();

    /// Index drawn according to the given nonnegative weights (need not be
    /// normalized).
    std::size_t categorical(const std::vector<double>& cumulative);

    /// Cumulative sums for categorical(); last entry is the total mass.
    static std::vector<double> cumulative(const std::vector<double>& weights);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace oddsquant
