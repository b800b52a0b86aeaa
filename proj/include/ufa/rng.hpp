#pragma once

#include <cstdint>
#include <random>

namespace ufa {

/// Deterministic random stream keyed by (seed, stream_id).
///
/// Every consumer that needs randomness (bootstrap replicate b, CV split,
/// perturbation pass i) gets its own stream derived from one root seed, so
/// results do not depend on the order in which consumers run.
class SeededRng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Independent stream sharing this generator's root seed.
    SeededRng derive(std::uint64_t stream_id) const { return SeededRng(seed_, stream_id); }

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    /// Uniform integer in [0, bound).
    std::size_t uniform_index(std::size_t bound);
    double normal(double mean, double stddev);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Stateless 64-bit mix used to derive child seeds (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace ufa
