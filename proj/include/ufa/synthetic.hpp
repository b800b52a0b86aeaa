#pragma once

#include <cstddef>
#include <cstdint>

#include "ufa/core.hpp"

namespace ufa::synthetic {

/// One variable x ~ U(0,1) with y = 1 iff x < cut.
Dataset step(std::size_t n_rows, double cut, std::uint64_t seed);

/// Independent U(0,1) variables and y ~ Bernoulli(rate), unrelated to x.
Dataset null_signal(std::size_t n_rows, std::size_t n_variables, double rate, std::uint64_t seed);

/// Variables are U(0,1). Each of the first n_signal variables carries a
/// planted low-side threshold at `signal_cut`; with r the number of signal
/// variables below their cut, y ~ Bernoulli(sigmoid(a + slope * r)) where a
/// is solved so that E[y] equals `incidence`. Remaining variables are noise.
/// With redundancy rho > 0 each signal cell copies a per-row shared latent
/// U(0,1) with probability rho instead of drawing its own value, so signal
/// variables overlap in what they know (marginals stay uniform).
struct PlantedConfig {
    std::size_t n_rows = 2000;
    std::size_t n_signal = 5;
    std::size_t n_noise = 5;
    double signal_cut = 0.25;
    double slope = 1.5;
    double incidence = 0.5;
    double redundancy = 0.0;
    std::uint64_t seed = 1;
};

Dataset planted(const PlantedConfig& cfg);

/// Rare-event preset: 13,000 rows, 30 variables of which 5 carry signal,
/// 2.3% incidence.
PlantedConfig rare_event_config(std::uint64_t seed);

/// Intercept a with E[sigmoid(a + slope * r)] = incidence under the exact law of r.
double planted_intercept(const PlantedConfig& cfg);

}  // namespace ufa::synthetic
