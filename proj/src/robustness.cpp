#include "ufa/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "ufa/errors.hpp"

namespace ufa {

std::string_view to_string(CorruptionKind k) { return k == CorruptionKind::Missing ? "missing" : "noise"; }

CorruptionKind parse_corruption_kind(std::string_view s) {
    if (s == "missing" || s == "Missing") return CorruptionKind::Missing;
    if (s == "noise" || s == "Noise") return CorruptionKind::Noise;
    throw InvalidArgument("unknown corruption kind: " + std::string(s));
}

namespace {

void check_fraction(double f) {
    if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("fraction must lie in [0, 1]");
}

// Chosen (variable, row) cells, grouped by variable and ascending by row.
std::vector<std::vector<std::size_t>> choose_cells(const Dataset& data, double fraction,
                                                   std::uint64_t seed, std::size_t& n_chosen) {
    std::vector<std::pair<std::size_t, std::size_t>> eligible;
    for (std::size_t j = 0; j < data.n_variables(); ++j) {
        const auto& col = data.variables()[j];
        for (std::size_t r = 0; r < data.n_rows(); ++r)
            if (col[r]) eligible.emplace_back(j, r);
    }
    n_chosen = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(eligible.size())));
    n_chosen = std::min(n_chosen, eligible.size());

    // Partial Fisher-Yates: the first n_chosen slots form a uniform sample.
    SeededRng rng(seed, 0);
    for (std::size_t i = 0; i < n_chosen; ++i) {
        const std::size_t pick = i + rng.uniform_index(eligible.size() - i);
        std::swap(eligible[i], eligible[pick]);
    }
    eligible.resize(n_chosen);
    std::sort(eligible.begin(), eligible.end());
    std::vector<std::vector<std::size_t>> by_var(data.n_variables());
    for (auto [j, r] : eligible) by_var[j].push_back(r);
    return by_var;
}

}  // namespace

CorruptionResult inject_missing(const Dataset& data, const PerturbationPlan& plan) {
    if (plan.kind != CorruptionKind::Missing)
        throw InvalidArgument("inject_missing needs a Missing plan");
    check_fraction(plan.fraction);
    CorruptionResult out;
    const auto chosen = choose_cells(data, plan.fraction, plan.seed, out.n_corrupted);
    std::vector<VariableColumn> cols;
    for (std::size_t j = 0; j < data.n_variables(); ++j) {
        auto cells = data.variables()[j].cells();
        for (auto r : chosen[j]) cells[r].reset();
        cols.emplace_back(data.variables()[j].name(), std::move(cells));
    }
    out.data = data.with_variables(std::move(cols));
    return out;
}

CorruptionResult inject_noise(const Dataset& data, const PerturbationPlan& plan) {
    if (plan.kind != CorruptionKind::Noise) throw InvalidArgument("inject_noise needs a Noise plan");
    check_fraction(plan.fraction);
    CorruptionResult out;
    const auto chosen = choose_cells(data, plan.fraction, plan.seed, out.n_corrupted);
    std::vector<VariableColumn> cols;
    for (std::size_t j = 0; j < data.n_variables(); ++j) {
        const auto& col = data.variables()[j];
        auto cells = col.cells();
        const auto present = col.present_values();
        const double var = sample_variance(present);
        if (var == 0.0) {
            out.warnings.push_back(col.name() + ": ConstantColumn, noise not applied");
        } else if (!chosen[j].empty()) {
            // One stream per variable keeps a column's noise independent of the others.
            SeededRng rng(plan.seed, j + 1);
            const double sd = std::sqrt(var);
            for (auto r : chosen[j]) cells[r] = *cells[r] + rng.normal(0.0, sd);
        }
        cols.emplace_back(col.name(), std::move(cells));
    }
    out.data = data.with_variables(std::move(cols));
    return out;
}

CorruptionResult corrupt(const Dataset& data, const PerturbationPlan& plan) {
    return plan.kind == CorruptionKind::Missing ? inject_missing(data, plan)
                                                : inject_noise(data, plan);
}

SweepReport robustness_sweep(const Dataset& data, const DetectionConfig& cfg, CorruptionKind kind,
                             std::span<const double> fractions, std::size_t k,
                             const SeededRng& rng, ClassifierKind classifier) {
    for (double f : fractions) check_fraction(f);
    SweepReport report;
    const auto baseline = cross_validate(data, cfg, k, rng, classifier);
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const PerturbationPlan plan{kind, fractions[i], mix_seed(rng.seed(), 1000 + i)};
        auto corrupted = corrupt(data, plan);
        for (auto& w : corrupted.warnings) {
            if (std::find(report.warnings.begin(), report.warnings.end(), w) == report.warnings.end())
                report.warnings.push_back(std::move(w));
        }
        const auto eval = fractions[i] == 0.0 ? baseline
                                              : cross_validate(corrupted.data, cfg, k, rng, classifier);
        SweepRow row;
        row.kind = kind;
        row.fraction = fractions[i];
        row.n_corrupted = corrupted.n_corrupted;
        row.accuracy = eval.accuracy;
        row.auroc = eval.auroc;
        row.delta_accuracy = baseline.accuracy - eval.accuracy;
        row.delta_auroc = baseline.auroc - eval.auroc;
        report.rows.push_back(row);
    }
    return report;
}

std::string sweep_to_csv(const SweepReport& report) {
    std::string out = "kind,fraction,accuracy,auroc,delta_accuracy,delta_auroc\n";
    for (const auto& r : report.rows) {
        out += std::string(to_string(r.kind)) + "," + format_real(r.fraction) + "," +
               format_real(r.accuracy) + "," + format_real(r.auroc) + "," +
               format_real(r.delta_accuracy) + "," + format_real(r.delta_auroc) + "\n";
    }
    return out;
}

}  // namespace ufa
