#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/rng.hpp"
#include "ufa/threshold.hpp"

namespace ufa {

/// Resampled optimal cuts for one (variable, side).
struct BootstrapDistribution {
    std::string variable;
    Side side = Side::BelowMedian;
    /// Cuts from replicates whose rule was significant, ascending.
    std::vector<double> cuts;
    std::size_t n_replicates = 0;
    /// Histogram bin width used for the mode.
    double bin_width = 0;
    std::optional<double> mode;
    std::optional<double> mean;
    /// Unbiased sample variance of `cuts` (0 with fewer than two).
    double variance = 0;
    /// Best cut on the full data, significant or not; absent if the grid is empty.
    std::optional<double> point_estimate;
};

struct BootstrapOptions {
    std::size_t n_replicates = 100;
};

/// Runs detection on `n_replicates` row-wise resamples (replicate b draws from
/// stream b of `rng`). Returns one distribution per (variable, side), in
/// variable order with BelowMedian first.
std::vector<BootstrapDistribution> bootstrap_thresholds(const Dataset& data,
                                                        const DetectionConfig& cfg,
                                                        std::size_t n_replicates,
                                                        const SeededRng& rng);

/// Midpoint of the most populated histogram bin (bins of `bin_width`
/// anchored at min(cuts)). Ties go to the bin whose midpoint is nearest
/// `point_estimate`, or to the lowest such bin without one.
double distribution_mode(std::span<const double> cuts, double bin_width,
                         std::optional<double> point_estimate = std::nullopt);

struct SubstitutionResult {
    std::vector<ThresholdRule> rules;
    std::vector<std::string> warnings;
    std::size_t dropped = 0;
};

/// Replaces each rule's cut with its distribution mode and rescores it on the
/// full data. Rules falling below min_support or significance are dropped;
/// rules without a usable distribution pass through unchanged.
SubstitutionResult substitute_bootstrap_cuts(const std::vector<ThresholdRule>& rules,
                                             const std::vector<BootstrapDistribution>& dists,
                                             const Dataset& data, const DetectionConfig& cfg);

}  // namespace ufa
