#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ufa/core.hpp"

namespace ufa {

enum class Side { BelowMedian, AboveMedian };
enum class Direction { LessThan, MoreThan };
enum class Polarity { HighRisk, LowRisk };

inline constexpr Side kSides[] = {Side::BelowMedian, Side::AboveMedian};

std::string_view to_string(Side s);
std::string_view to_string(Direction d);
std::string_view to_string(Polarity p);
Side parse_side(std::string_view s);
Direction parse_direction(std::string_view s);
Polarity parse_polarity(std::string_view s);

inline Direction direction_of(Side s) {
    return s == Side::BelowMedian ? Direction::LessThan : Direction::MoreThan;
}

/// True when `value` lies strictly outside `cut` in the given direction.
inline bool is_outside(double value, double cut, Direction d) {
    return d == Direction::LessThan ? value < cut : value > cut;
}

struct DetectionConfig {
    std::size_t n_segments = 50;
    std::size_t min_support = 5;
    double critical_value = 2.576;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Outcome rate of the interquartile rows, the reference population every
/// candidate cut is tested against.
struct Baseline {
    std::size_t n_iqr = 0;
    std::size_t n_iqr_positive = 0;
    double p_iqr() const { return static_cast<double>(n_iqr_positive) / static_cast<double>(n_iqr); }
};

struct CandidateThreshold {
    double cut = 0;
    Side side = Side::BelowMedian;
    std::size_t n_outside = 0;
    std::size_t n_outside_positive = 0;
    double p_outside = 0;
    double z = 0;
};

struct ThresholdRule {
    std::string variable;
    Side side = Side::BelowMedian;
    double cut = 0;
    Direction direction = Direction::LessThan;
    std::size_t n_outside = 0;
    double p_outside = 0;
    std::size_t n_iqr = 0;
    double p_iqr = 0;
    double z = 0;
    bool significant = false;
    Polarity polarity = Polarity::HighRisk;

    friend bool operator==(const ThresholdRule&, const ThresholdRule&) = default;
};

/// Rows whose present value lies in [p25, p75] (inclusive) and their outcome
/// rate. Throws InsufficientData with fewer than 4 present values.
Baseline baseline_iqr(const VariableColumn& col, const BinaryTarget& target);

/// Two-proportion Z statistic of an outside region against the baseline,
/// using the pooled (support-weighted) rate in the standard error. Returns
/// exactly 0 when the pooled rate is 0 or 1.
double proportion_z(std::size_t n_outside, std::size_t n_outside_positive, std::size_t n_iqr,
                    std::size_t n_iqr_positive);

/// Interior boundaries of n_segments equal-length segments over
/// [min, median] (BelowMedian) or [median, max] (AboveMedian), ascending,
/// keeping only cuts whose outside region holds at least min_support rows.
std::vector<double> candidate_grid(const VariableColumn& col, Side side,
                                   const DetectionConfig& cfg);

CandidateThreshold evaluate_candidate(double cut, Side side, const VariableColumn& col,
                                      const BinaryTarget& target, const Baseline& baseline);

/// Best candidate by |z| regardless of significance. Ties go to the larger
/// support, then to the lower cut. Absent when the grid is empty.
std::optional<ThresholdRule> best_threshold(const VariableColumn& col, const BinaryTarget& target,
                                            Side side, const DetectionConfig& cfg);

/// best_threshold, kept only if |z| reaches the critical value.
std::optional<ThresholdRule> detect_threshold(const VariableColumn& col,
                                              const BinaryTarget& target, Side side,
                                              const DetectionConfig& cfg);

/// Rule for a caller-chosen cut, scored against the column's own baseline.
/// Returns absent when the outside region is empty.
std::optional<ThresholdRule> rule_at_cut(const VariableColumn& col, const BinaryTarget& target,
                                         Side side, double cut, const DetectionConfig& cfg);

struct DetectionReport {
    std::vector<ThresholdRule> rules;
    std::vector<std::string> warnings;
};

/// Significant rules for every (variable, side) in variable order,
/// BelowMedian before AboveMedian. Variables that cannot be analysed are
/// reported in `warnings`. Variables are processed in parallel.
DetectionReport detect_all(const Dataset& data, const DetectionConfig& cfg);

/// Width of one grid segment for the given side; 0 for a degenerate range.
double segment_width(const VariableColumn& col, Side side, const DetectionConfig& cfg);

}  // namespace ufa
