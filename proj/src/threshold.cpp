#include "ufa/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include "ufa/errors.hpp"
#include "ufa/parallel.hpp"

namespace ufa {

std::string_view to_string(Side s) {
    return s == Side::BelowMedian ? "BelowMedian" : "AboveMedian";
}
std::string_view to_string(Direction d) { return d == Direction::LessThan ? "LessThan" : "MoreThan"; }
std::string_view to_string(Polarity p) { return p == Polarity::HighRisk ? "HighRisk" : "LowRisk"; }

Side parse_side(std::string_view s) {
    if (s == "BelowMedian") return Side::BelowMedian;
    if (s == "AboveMedian") return Side::AboveMedian;
    throw InvalidArgument("unknown side: " + std::string(s));
}
Direction parse_direction(std::string_view s) {
    if (s == "LessThan") return Direction::LessThan;
    if (s == "MoreThan") return Direction::MoreThan;
    throw InvalidArgument("unknown direction: " + std::string(s));
}
Polarity parse_polarity(std::string_view s) {
    if (s == "HighRisk") return Polarity::HighRisk;
    if (s == "LowRisk") return Polarity::LowRisk;
    throw InvalidArgument("unknown polarity: " + std::string(s));
}

void DetectionConfig::validate() const {
    if (n_segments < 2) throw InvalidArgument("n_segments must be at least 2");
    if (min_support < 1) throw InvalidArgument("min_support must be at least 1");
    if (!(critical_value > 0) || !std::isfinite(critical_value))
        throw InvalidArgument("critical_value must be a positive real");
}

namespace {

// Present values sorted ascending with a running count of positives, so that
// the support and positive count of any outside region is two binary searches.
class SortedColumn {
public:
    SortedColumn(const VariableColumn& col, const BinaryTarget& target) {
        if (target.size() != col.size())
            throw InvalidArgument("target and column " + col.name() + " are not row-aligned");
        std::vector<std::pair<double, std::uint8_t>> rows;
        rows.reserve(col.size());
        for (std::size_t r = 0; r < col.size(); ++r)
            if (col[r]) rows.emplace_back(*col[r], target[r]);
        std::sort(rows.begin(), rows.end());
        values_.reserve(rows.size());
        prefix_pos_.reserve(rows.size() + 1);
        prefix_pos_.push_back(0);
        for (const auto& [v, y] : rows) {
            values_.push_back(v);
            prefix_pos_.push_back(prefix_pos_.back() + y);
        }
    }

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    /// (support, positives) of {value < cut} or {value > cut}.
    std::pair<std::size_t, std::size_t> outside(double cut, Direction d) const {
        if (d == Direction::LessThan) {
            const auto k = static_cast<std::size_t>(
                std::lower_bound(values_.begin(), values_.end(), cut) - values_.begin());
            return {k, prefix_pos_[k]};
        }
        const auto k = static_cast<std::size_t>(
            std::upper_bound(values_.begin(), values_.end(), cut) - values_.begin());
        return {values_.size() - k, prefix_pos_.back() - prefix_pos_[k]};
    }

    /// (count, positives) of {lo <= value <= hi}.
    std::pair<std::size_t, std::size_t> within(double lo, double hi) const {
        const auto a = static_cast<std::size_t>(
            std::lower_bound(values_.begin(), values_.end(), lo) - values_.begin());
        const auto b = static_cast<std::size_t>(
            std::upper_bound(values_.begin(), values_.end(), hi) - values_.begin());
        if (b <= a) return {0, 0};
        return {b - a, prefix_pos_[b] - prefix_pos_[a]};
    }

private:
    std::vector<double> values_;
    std::vector<std::size_t> prefix_pos_;
};

Baseline baseline_from(const SortedColumn& sc, const std::string& name) {
    if (sc.size() < 4)
        throw InsufficientData("variable " + name + " has fewer than 4 present values");
    const double p25 = quantile_sorted(sc.values(), 0.25);
    const double p75 = quantile_sorted(sc.values(), 0.75);
    auto [n, pos] = sc.within(p25, p75);
    if (n == 0) throw InsufficientData("variable " + name + " has an empty interquartile range");
    return Baseline{n, pos};
}

std::vector<double> grid_from(const SortedColumn& sc, Side side, const DetectionConfig& cfg) {
    std::vector<double> cuts;
    if (sc.size() < cfg.min_support + 1) return cuts;
    const auto vals = sc.values();
    const double median = quantile_sorted(vals, 0.5);
    const double lo = side == Side::BelowMedian ? vals.front() : median;
    const double hi = side == Side::BelowMedian ? median : vals.back();
    if (!(hi > lo)) return cuts;
    const double span = hi - lo;
    const auto dir = direction_of(side);
    const auto n = static_cast<double>(cfg.n_segments);
    for (std::size_t i = 1; i < cfg.n_segments; ++i) {
        const double cut = lo + span * static_cast<double>(i) / n;
        if (sc.outside(cut, dir).first >= cfg.min_support) cuts.push_back(cut);
    }
    return cuts;
}

CandidateThreshold candidate_from(const SortedColumn& sc, double cut, Side side,
                                  const Baseline& baseline) {
    auto [n_out, pos_out] = sc.outside(cut, direction_of(side));
    if (n_out == 0) throw InsufficientData("candidate cut has an empty outside region");
    CandidateThreshold c;
    c.cut = cut;
    c.side = side;
    c.n_outside = n_out;
    c.n_outside_positive = pos_out;
    c.p_outside = static_cast<double>(pos_out) / static_cast<double>(n_out);
    c.z = proportion_z(n_out, pos_out, baseline.n_iqr, baseline.n_iqr_positive);
    return c;
}

ThresholdRule make_rule(const std::string& variable, const CandidateThreshold& c,
                        const Baseline& baseline, const DetectionConfig& cfg) {
    ThresholdRule r;
    r.variable = variable;
    r.side = c.side;
    r.cut = c.cut;
    r.direction = direction_of(c.side);
    r.n_outside = c.n_outside;
    r.p_outside = c.p_outside;
    r.n_iqr = baseline.n_iqr;
    r.p_iqr = baseline.p_iqr();
    r.z = c.z;
    r.significant = std::abs(c.z) >= cfg.critical_value;
    r.polarity = c.z > 0 ? Polarity::HighRisk : Polarity::LowRisk;
    return r;
}

}  // namespace

double proportion_z(std::size_t n_outside, std::size_t n_outside_positive, std::size_t n_iqr,
                    std::size_t n_iqr_positive) {
    if (n_outside == 0 || n_iqr == 0)
        throw InsufficientData("proportion test needs non-empty populations");
    const std::size_t total = n_outside + n_iqr;
    const std::size_t pooled_pos = n_outside_positive + n_iqr_positive;
    if (pooled_pos == 0 || pooled_pos == total) return 0.0;
    // (p_out - p_iqr) / sqrt(p_wa (1 - p_wa) (1/n_iqr + 1/n_out)) rewritten over
    // integer counts: the numerator and the pooled-variance product are both
    // exactly antisymmetric/symmetric under relabelling y -> 1 - y.
    const auto diff = static_cast<std::int64_t>(n_outside_positive * n_iqr) -
                      static_cast<std::int64_t>(n_iqr_positive * n_outside);
    const double pooled = static_cast<double>(pooled_pos) * static_cast<double>(total - pooled_pos);
    const double sizes = static_cast<double>(n_outside) * static_cast<double>(n_iqr);
    return static_cast<double>(diff) * std::sqrt(static_cast<double>(total) / (sizes * pooled));
}

Baseline baseline_iqr(const VariableColumn& col, const BinaryTarget& target) {
    return baseline_from(SortedColumn(col, target), col.name());
}

std::vector<double> candidate_grid(const VariableColumn& col, Side side,
                                   const DetectionConfig& cfg) {
    cfg.validate();
    // Target is irrelevant to the grid; a zero target keeps SortedColumn happy.
    return grid_from(SortedColumn(col, BinaryTarget(std::vector<std::uint8_t>(col.size(), 0))),
                     side, cfg);
}

CandidateThreshold evaluate_candidate(double cut, Side side, const VariableColumn& col,
                                      const BinaryTarget& target, const Baseline& baseline) {
    return candidate_from(SortedColumn(col, target), cut, side, baseline);
}

std::optional<ThresholdRule> best_threshold(const VariableColumn& col, const BinaryTarget& target,
                                            Side side, const DetectionConfig& cfg) {
    cfg.validate();
    const SortedColumn sc(col, target);
    if (sc.size() < 2 * cfg.min_support)
        throw InsufficientData("variable " + col.name() + " has fewer than " +
                               std::to_string(2 * cfg.min_support) + " present values");
    const Baseline baseline = baseline_from(sc, col.name());
    std::optional<CandidateThreshold> best;
    for (double cut : grid_from(sc, side, cfg)) {
        const auto c = candidate_from(sc, cut, side, baseline);
        if (!best) {
            best = c;
            continue;
        }
        const double a = std::abs(c.z);
        const double b = std::abs(best->z);
        if (a > b || (a == b && c.n_outside > best->n_outside)) best = c;
    }
    if (!best) return std::nullopt;
    return make_rule(col.name(), *best, baseline, cfg);
}

std::optional<ThresholdRule> detect_threshold(const VariableColumn& col,
                                              const BinaryTarget& target, Side side,
                                              const DetectionConfig& cfg) {
    auto rule = best_threshold(col, target, side, cfg);
    if (!rule || !rule->significant) return std::nullopt;
    return rule;
}

std::optional<ThresholdRule> rule_at_cut(const VariableColumn& col, const BinaryTarget& target,
                                         Side side, double cut, const DetectionConfig& cfg) {
    const SortedColumn sc(col, target);
    const Baseline baseline = baseline_from(sc, col.name());
    if (sc.outside(cut, direction_of(side)).first == 0) return std::nullopt;
    return make_rule(col.name(), candidate_from(sc, cut, side, baseline), baseline, cfg);
}

double segment_width(const VariableColumn& col, Side side, const DetectionConfig& cfg) {
    const auto s = column_stats(col);
    const double span = side == Side::BelowMedian ? s.median - s.min : s.max - s.median;
    return span / static_cast<double>(cfg.n_segments);
}

DetectionReport detect_all(const Dataset& data, const DetectionConfig& cfg) {
    cfg.validate();
    if (!data.is_labeled()) throw InvalidArgument("detection requires a labeled dataset");
    if (data.n_rows() == 0) throw InsufficientData("dataset has no rows");

    struct PerVariable {
        std::vector<ThresholdRule> rules;
        std::optional<std::string> warning;
    };
    std::vector<PerVariable> results(data.n_variables());
    parallel_for(data.n_variables(), [&](std::size_t j) {
        const auto& col = data.variables()[j];
        auto& out = results[j];
        try {
            const auto stats = column_stats(col);
            if (stats.min == stats.max) {
                out.warning = col.name() + ": constant column, no candidate thresholds";
                return;
            }
            for (Side side : kSides)
                if (auto r = detect_threshold(col, data.target(), side, cfg))
                    out.rules.push_back(std::move(*r));
        } catch (const EmptyColumn&) {
            out.warning = col.name() + ": no present values";
        } catch (const InsufficientData& e) {
            out.rules.clear();
            out.warning = col.name() + ": " + e.what();
        }
    });

    DetectionReport report;
    for (auto& r : results) {
        for (auto& rule : r.rules) report.rules.push_back(std::move(rule));
        if (r.warning) report.warnings.push_back(std::move(*r.warning));
    }
    return report;
}

}  // namespace ufa
