#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/rng.hpp"
#include "ufa/threshold.hpp"

namespace ufa {

/// Per-row indicators, one column per rule, plus per-row counts of the
/// high-risk and low-risk flags that fired.
class FlagMatrix {
public:
    FlagMatrix() = default;
    FlagMatrix(std::vector<ThresholdRule> rules, std::size_t n_rows);

    const std::vector<ThresholdRule>& rules() const { return rules_; }
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_rules() const { return rules_.size(); }

    std::uint8_t bit(std::size_t row, std::size_t rule) const {
        return bits_[row * rules_.size() + rule];
    }
    void set(std::size_t row, std::size_t rule);

    const std::vector<int>& high_count() const { return high_; }
    const std::vector<int>& low_count() const { return low_; }
    /// high_count - low_count for every row.
    std::vector<int> scores() const;

private:
    std::vector<ThresholdRule> rules_;
    std::size_t n_rows_ = 0;
    std::vector<std::uint8_t> bits_;
    std::vector<int> high_;
    std::vector<int> low_;
};

/// A row is predicted positive iff w_high * high_count - w_low * low_count >= intercept.
/// Both weights are fixed at one.
struct NUfaModel {
    std::vector<ThresholdRule> rules;
    int w_high = 1;
    int w_low = 1;
    int intercept = 0;
};

struct Prediction {
    std::vector<std::uint8_t> labels;
    std::vector<int> scores;
    std::vector<int> high_count;
    std::vector<int> low_count;
};

/// Throws UnknownVariable if a rule names a variable absent from `data`.
FlagMatrix build_flags(const Dataset& data, const std::vector<ThresholdRule>& rules);

/// Chooses the integer intercept in [min score, max score + 1] with the fewest
/// training errors; ties go to the smallest intercept.
NUfaModel fit_nufa(const FlagMatrix& flags, const BinaryTarget& target);

/// Training errors of "predict 1 iff score >= intercept".
std::size_t count_errors(std::span<const int> scores, const BinaryTarget& target, int intercept);

Prediction predict_nufa(const NUfaModel& model, const Dataset& data);

/// Mann-Whitney AUROC with ties counted as one half. Throws DegenerateTarget
/// unless both classes are present.
double auroc(std::span<const double> scores, const BinaryTarget& target);
double auroc(std::span<const int> scores, const BinaryTarget& target);

double accuracy(std::span<const std::uint8_t> predicted, const BinaryTarget& target);

/// Which flag-count classifier cross_validate fits on each training fold.
enum class ClassifierKind {
    NUfa,
    /// N-UFA restricted to the rules of the variable owning the single
    /// largest-|z| rule; the reference point for robustness comparisons.
    BestVariableStump,
};

/// Rules of the variable holding the largest-|z| rule (empty in, empty out).
std::vector<ThresholdRule> best_variable_rules(const std::vector<ThresholdRule>& rules);

struct FoldResult {
    double accuracy = 0;
    double auroc = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t n_rules = 0;
    int intercept = 0;
};

struct EvalReport {
    std::size_t folds = 0;
    double accuracy = 0;
    double auroc = 0;
    std::vector<FoldResult> per_fold;
    std::pair<double, double> ci_accuracy;
    std::pair<double, double> ci_auroc;
};

/// Stratified fold assignment: fold index per row. Each class is shuffled
/// with `rng` and dealt round-robin across folds.
std::vector<std::size_t> stratified_folds(const BinaryTarget& target, std::size_t k, SeededRng rng);

/// Stratified k-fold evaluation. Detection and intercept fitting see only the
/// training rows of each fold. Intervals are mean +/- 1.96 * sd / sqrt(k).
EvalReport cross_validate(const Dataset& data, const DetectionConfig& cfg, std::size_t k,
                          const SeededRng& rng, ClassifierKind kind = ClassifierKind::NUfa);

/// Normal-approximation 95% interval over fold statistics.
std::pair<double, double> mean_interval(std::span<const double> values);

/// Column name used for a rule in flag exports.
std::string flag_column_name(const ThresholdRule& rule);

/// CSV: one 0/1 column per rule, then high_count, low_count and (if given)
/// the target.
std::string flags_to_csv(const FlagMatrix& flags, const BinaryTarget* target = nullptr);
void export_flags(const FlagMatrix& flags, const std::string& path,
                  const BinaryTarget* target = nullptr);

}  // namespace ufa
