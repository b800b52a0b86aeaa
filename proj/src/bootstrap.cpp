#include "ufa/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ufa/errors.hpp"
#include "ufa/parallel.hpp"

namespace ufa {

double distribution_mode(std::span<const double> cuts, double bin_width,
                         std::optional<double> point_estimate) {
    if (cuts.empty()) throw EmptyDistribution();
    if (!(bin_width > 0) || !std::isfinite(bin_width))
        throw InvalidArgument("bin width must be a positive real");
    const double anchor = *std::min_element(cuts.begin(), cuts.end());
    std::vector<std::size_t> counts;
    for (double c : cuts) {
        const auto bin = static_cast<std::size_t>(std::floor((c - anchor) / bin_width));
        if (bin >= counts.size()) counts.resize(bin + 1, 0);
        ++counts[bin];
    }
    const auto midpoint = [&](std::size_t bin) {
        return anchor + (static_cast<double>(bin) + 0.5) * bin_width;
    };
    std::size_t best = 0;
    for (std::size_t b = 1; b < counts.size(); ++b) {
        if (counts[b] > counts[best]) {
            best = b;
        } else if (counts[b] == counts[best] && point_estimate &&
                   std::abs(midpoint(b) - *point_estimate) <
                       std::abs(midpoint(best) - *point_estimate)) {
            best = b;
        }
    }
    return midpoint(best);
}

std::vector<BootstrapDistribution> bootstrap_thresholds(const Dataset& data,
                                                        const DetectionConfig& cfg,
                                                        std::size_t n_replicates,
                                                        const SeededRng& rng) {
    cfg.validate();
    if (n_replicates < 1) throw InvalidArgument("n_replicates must be at least 1");
    if (!data.is_labeled()) throw InvalidArgument("bootstrap requires a labeled dataset");
    if (data.n_rows() == 0) throw InsufficientData("dataset has no rows");

    const std::size_t n_vars = data.n_variables();
    std::vector<BootstrapDistribution> dists(2 * n_vars);
    for (std::size_t j = 0; j < n_vars; ++j) {
        const auto& col = data.variables()[j];
        for (std::size_t s = 0; s < 2; ++s) {
            auto& d = dists[2 * j + s];
            d.variable = col.name();
            d.side = kSides[s];
            d.n_replicates = n_replicates;
            try {
                if (auto best = best_threshold(col, data.target(), d.side, cfg))
                    d.point_estimate = best->cut;
                d.bin_width = segment_width(col, d.side, cfg);
            } catch (const Error&) {
                // Column unusable on the full data; replicates may still find cuts.
            }
        }
    }

    std::vector<std::vector<ThresholdRule>> per_replicate(n_replicates);
    parallel_for(n_replicates, [&](std::size_t b) {
        SeededRng stream = rng.derive(b);
        std::vector<std::size_t> rows(data.n_rows());
        for (auto& r : rows) r = stream.uniform_index(data.n_rows());
        per_replicate[b] = detect_all(data.select_rows(rows), cfg).rules;
    });

    for (const auto& rules : per_replicate) {
        for (const auto& rule : rules) {
            const auto j = *data.find(rule.variable);
            dists[2 * j + (rule.side == Side::AboveMedian ? 1 : 0)].cuts.push_back(rule.cut);
        }
    }

    for (auto& d : dists) {
        std::sort(d.cuts.begin(), d.cuts.end());
        if (d.cuts.empty()) continue;
        if (!(d.bin_width > 0)) {
            // Degenerate full-data range: fall back to the spread of the cuts.
            const double spread = d.cuts.back() - d.cuts.front();
            d.bin_width = spread > 0 ? spread / static_cast<double>(cfg.n_segments) : 1.0;
        }
        d.mode = distribution_mode(d.cuts, d.bin_width, d.point_estimate);
        d.mean = std::accumulate(d.cuts.begin(), d.cuts.end(), 0.0) /
                 static_cast<double>(d.cuts.size());
        d.variance = sample_variance(d.cuts);
    }
    return dists;
}

SubstitutionResult substitute_bootstrap_cuts(const std::vector<ThresholdRule>& rules,
                                             const std::vector<BootstrapDistribution>& dists,
                                             const Dataset& data, const DetectionConfig& cfg) {
    cfg.validate();
    SubstitutionResult out;
    for (const auto& rule : rules) {
        const auto it = std::find_if(dists.begin(), dists.end(), [&](const auto& d) {
            return d.variable == rule.variable && d.side == rule.side;
        });
        if (it == dists.end() || !it->mode) {
            out.warnings.push_back(rule.variable + " " + std::string(to_string(rule.side)) +
                                   ": no bootstrap distribution, rule kept unchanged");
            out.rules.push_back(rule);
            continue;
        }
        const auto& col = data.variable(rule.variable);
        auto rescored = rule_at_cut(col, data.target(), rule.side, *it->mode, cfg);
        if (!rescored || rescored->n_outside < cfg.min_support || !rescored->significant) {
            ++out.dropped;
            continue;
        }
        out.rules.push_back(std::move(*rescored));
    }
    return out;
}

}  // namespace ufa
