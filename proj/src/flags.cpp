#include "ufa/flags.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ufa/errors.hpp"
#include "ufa/parallel.hpp"

namespace ufa {

FlagMatrix::FlagMatrix(std::vector<ThresholdRule> rules, std::size_t n_rows)
    : rules_(std::move(rules)),
      n_rows_(n_rows),
      bits_(n_rows * rules_.size(), 0),
      high_(n_rows, 0),
      low_(n_rows, 0) {}

void FlagMatrix::set(std::size_t row, std::size_t rule) {
    auto& b = bits_[row * rules_.size() + rule];
    if (b) return;
    b = 1;
    if (rules_[rule].polarity == Polarity::HighRisk)
        ++high_[row];
    else
        ++low_[row];
}

std::vector<int> FlagMatrix::scores() const {
    std::vector<int> s(n_rows_);
    for (std::size_t r = 0; r < n_rows_; ++r) s[r] = high_[r] - low_[r];
    return s;
}

FlagMatrix build_flags(const Dataset& data, const std::vector<ThresholdRule>& rules) {
    std::vector<const VariableColumn*> cols;
    cols.reserve(rules.size());
    for (const auto& rule : rules) {
        auto idx = data.find(rule.variable);
        if (!idx) throw UnknownVariable(rule.variable);
        cols.push_back(&data.variables()[*idx]);
    }
    FlagMatrix flags(rules, data.n_rows());
    for (std::size_t j = 0; j < rules.size(); ++j) {
        const auto& col = *cols[j];
        for (std::size_t r = 0; r < data.n_rows(); ++r) {
            if (col[r] && is_outside(*col[r], rules[j].cut, rules[j].direction)) flags.set(r, j);
        }
    }
    return flags;
}

std::size_t count_errors(std::span<const int> scores, const BinaryTarget& target, int intercept) {
    std::size_t errors = 0;
    for (std::size_t r = 0; r < scores.size(); ++r) {
        const bool predicted = scores[r] >= intercept;
        if (predicted != (target[r] == 1)) ++errors;
    }
    return errors;
}

NUfaModel fit_nufa(const FlagMatrix& flags, const BinaryTarget& target) {
    if (target.size() != flags.n_rows())
        throw InvalidArgument("flag matrix and target are not row-aligned");
    const std::size_t n_pos = target.count_positive();
    if (n_pos == 0 || n_pos == target.size())
        throw DegenerateTarget("intercept fitting needs both classes present");

    const auto scores = flags.scores();
    const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    const int lo = *lo_it;
    const int hi = *hi_it;

    // Histogram of scores per class; errors(b) = positives below b + negatives at or above b.
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::size_t> pos(width, 0), neg(width, 0);
    for (std::size_t r = 0; r < scores.size(); ++r) {
        const auto bin = static_cast<std::size_t>(scores[r] - lo);
        (target[r] ? pos[bin] : neg[bin])++;
    }
    std::size_t pos_below = 0;
    std::size_t neg_at_or_above = target.size() - n_pos;
    std::size_t best_errors = pos_below + neg_at_or_above;
    int best_b = lo;
    for (std::size_t i = 0; i < width; ++i) {
        // Move b from lo + i to lo + i + 1.
        pos_below += pos[i];
        neg_at_or_above -= neg[i];
        const std::size_t e = pos_below + neg_at_or_above;
        if (e < best_errors) {
            best_errors = e;
            best_b = lo + static_cast<int>(i) + 1;
        }
    }
    NUfaModel model;
    model.rules = flags.rules();
    model.intercept = best_b;
    return model;
}

Prediction predict_nufa(const NUfaModel& model, const Dataset& data) {
    const auto flags = build_flags(data, model.rules);
    Prediction p;
    p.high_count = flags.high_count();
    p.low_count = flags.low_count();
    p.scores.resize(flags.n_rows());
    p.labels.resize(flags.n_rows());
    for (std::size_t r = 0; r < flags.n_rows(); ++r) {
        p.scores[r] = model.w_high * p.high_count[r] - model.w_low * p.low_count[r];
        p.labels[r] = p.scores[r] >= model.intercept ? 1 : 0;
    }
    return p;
}

double auroc(std::span<const double> scores, const BinaryTarget& target) {
    if (scores.size() != target.size())
        throw InvalidArgument("scores and target are not row-aligned");
    const std::size_t n = scores.size();
    const std::size_t n_pos = target.count_positive();
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DegenerateTarget("AUROC needs both classes present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // Sum of 1-based mid-ranks of positives.
    double rank_sum_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (target[order[t]]) rank_sum_pos += mid_rank;
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

double auroc(std::span<const int> scores, const BinaryTarget& target) {
    std::vector<double> s(scores.begin(), scores.end());
    return auroc(std::span<const double>(s), target);
}

double accuracy(std::span<const std::uint8_t> predicted, const BinaryTarget& target) {
    if (predicted.size() != target.size())
        throw InvalidArgument("predictions and target are not row-aligned");
    if (predicted.empty()) throw InvalidArgument("accuracy of an empty sample");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < predicted.size(); ++r) hits += predicted[r] == target[r];
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

std::vector<ThresholdRule> best_variable_rules(const std::vector<ThresholdRule>& rules) {
    if (rules.empty()) return {};
    const auto best = std::max_element(rules.begin(), rules.end(), [](const auto& a, const auto& b) {
        return std::abs(a.z) < std::abs(b.z);
    });
    std::vector<ThresholdRule> out;
    for (const auto& r : rules)
        if (r.variable == best->variable) out.push_back(r);
    return out;
}

std::vector<std::size_t> stratified_folds(const BinaryTarget& target, std::size_t k,
                                          SeededRng rng) {
    if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
    std::vector<std::size_t> by_class[2];
    for (std::size_t r = 0; r < target.size(); ++r) by_class[target[r]].push_back(r);
    if (by_class[0].empty() || by_class[1].empty())
        throw DegenerateTarget("cross-validation needs both classes present");
    if (by_class[0].size() < k || by_class[1].size() < k)
        throw TooFewRows("each class needs at least " + std::to_string(k) + " rows for " +
                         std::to_string(k) + "-fold cross-validation");
    std::vector<std::size_t> fold(target.size());
    std::size_t deal = 0;
    for (auto& rows : by_class) {
        std::shuffle(rows.begin(), rows.end(), rng);
        for (auto r : rows) fold[r] = deal++ % k;
    }
    return fold;
}

std::pair<double, double> mean_interval(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("interval of an empty sample");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    const double half = 1.96 * std::sqrt(sample_variance(values)) / std::sqrt(n);
    return {mean - half, mean + half};
}

EvalReport cross_validate(const Dataset& data, const DetectionConfig& cfg, std::size_t k,
                          const SeededRng& rng, ClassifierKind kind) {
    cfg.validate();
    if (!data.is_labeled()) throw InvalidArgument("cross-validation requires a labeled dataset");
    const auto fold_of = stratified_folds(data.target(), k, rng.derive(0));

    std::vector<FoldResult> results(k);
    parallel_for(k, [&](std::size_t f) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < data.n_rows(); ++r) (fold_of[r] == f ? test : train).push_back(r);
        const Dataset train_set = data.select_rows(train);
        const Dataset test_set = data.select_rows(test);

        auto rules = detect_all(train_set, cfg).rules;
        if (kind == ClassifierKind::BestVariableStump) rules = best_variable_rules(rules);
        const auto model = fit_nufa(build_flags(train_set, rules), train_set.target());
        const auto pred = predict_nufa(model, test_set);

        auto& out = results[f];
        out.accuracy = accuracy(pred.labels, test_set.target());
        out.auroc = auroc(std::span<const int>(pred.scores), test_set.target());
        out.n_train = train.size();
        out.n_test = test.size();
        out.n_rules = rules.size();
        out.intercept = model.intercept;
    });

    EvalReport report;
    report.folds = k;
    report.per_fold = results;
    std::vector<double> acc, auc;
    for (const auto& r : results) {
        acc.push_back(r.accuracy);
        auc.push_back(r.auroc);
    }
    report.accuracy = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(k);
    report.auroc = std::accumulate(auc.begin(), auc.end(), 0.0) / static_cast<double>(k);
    report.ci_accuracy = mean_interval(acc);
    report.ci_auroc = mean_interval(auc);
    return report;
}

std::string flag_column_name(const ThresholdRule& rule) {
    return rule.variable + "_" + std::string(to_string(rule.direction)) + "_" +
           format_real(rule.cut);
}

std::string flags_to_csv(const FlagMatrix& flags, const BinaryTarget* target) {
    if (target && target->size() != flags.n_rows())
        throw InvalidArgument("flag matrix and target are not row-aligned");
    std::string out;
    for (const auto& rule : flags.rules()) out += flag_column_name(rule) + ",";
    out += "high_count,low_count";
    if (target) out += ",target";
    out.push_back('\n');
    for (std::size_t r = 0; r < flags.n_rows(); ++r) {
        for (std::size_t j = 0; j < flags.n_rules(); ++j) {
            out.push_back(flags.bit(r, j) ? '1' : '0');
            out.push_back(',');
        }
        out += std::to_string(flags.high_count()[r]) + "," + std::to_string(flags.low_count()[r]);
        if (target) {
            out.push_back(',');
            out.push_back((*target)[r] ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

void export_flags(const FlagMatrix& flags, const std::string& path, const BinaryTarget* target) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileUnwritable(path);
    out << flags_to_csv(flags, target);
    if (!out) throw FileUnwritable(path);
}

}  // namespace ufa
