#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/flags.hpp"
#include "ufa/rng.hpp"
#include "ufa/threshold.hpp"

namespace ufa {

enum class CorruptionKind { Missing, Noise };

std::string_view to_string(CorruptionKind k);
CorruptionKind parse_corruption_kind(std::string_view s);

struct PerturbationPlan {
    CorruptionKind kind = CorruptionKind::Missing;
    /// Share of eligible (present, non-target) cells to corrupt, in [0, 1].
    double fraction = 0;
    std::uint64_t seed = 0;
};

struct CorruptionResult {
    Dataset data;
    std::size_t n_corrupted = 0;
    std::vector<std::string> warnings;
};

/// Marks floor(fraction * eligible) distinct present cells missing, chosen
/// uniformly over (row, variable) pairs. The target is never touched.
CorruptionResult inject_missing(const Dataset& data, const PerturbationPlan& plan);

/// Adds N(0, var_v) noise to floor(fraction * eligible) distinct present cells,
/// where var_v is the unbiased variance of variable v before perturbation.
/// Cells chosen in a constant column are left unchanged (with a warning).
CorruptionResult inject_noise(const Dataset& data, const PerturbationPlan& plan);

CorruptionResult corrupt(const Dataset& data, const PerturbationPlan& plan);

struct SweepRow {
    CorruptionKind kind = CorruptionKind::Missing;
    double fraction = 0;
    std::size_t n_corrupted = 0;
    double accuracy = 0;
    double auroc = 0;
    /// Baseline minus corrupted; positive means performance dropped.
    double delta_accuracy = 0;
    double delta_auroc = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

/// Corrupts the full dataset at each fraction (pass i seeded from stream i of
/// `rng`), then cross-validates with the same fold assignment as the
/// uncorrupted baseline. Rows come out in the order of `fractions`.
SweepReport robustness_sweep(const Dataset& data, const DetectionConfig& cfg, CorruptionKind kind,
                             std::span<const double> fractions, std::size_t k,
                             const SeededRng& rng,
                             ClassifierKind classifier = ClassifierKind::NUfa);

std::string sweep_to_csv(const SweepReport& report);

}  // namespace ufa
