#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "ufa/errors.hpp"
#include "ufa/flags.hpp"
#include "ufa/parallel.hpp"
#include "ufa/synthetic.hpp"

using namespace ufa;
using namespace ufa::test;

namespace {

ThresholdRule make_rule(const std::string& var, Side side, double cut, Polarity pol) {
    ThresholdRule r;
    r.variable = var;
    r.side = side;
    r.direction = direction_of(side);
    r.cut = cut;
    r.polarity = pol;
    r.significant = true;
    r.z = pol == Polarity::HighRisk ? 3.0 : -3.0;
    return r;
}

// O(n^2) pairwise AUROC.
double pairwise_auroc(const std::vector<double>& s, const BinaryTarget& y) {
    double wins = 0;
    double pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!y[i]) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j]) continue;
            pairs += 1;
            if (s[i] > s[j]) wins += 1;
            else if (s[i] == s[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

FlagMatrix flags_with_scores(const std::vector<int>& scores) {
    // One HighRisk rule per unit of score on a dummy variable; each row gets
    // `score` flags.
    const int max_s = *std::max_element(scores.begin(), scores.end());
    std::vector<ThresholdRule> rules;
    for (int k = 0; k < max_s; ++k)
        rules.push_back(make_rule("v", Side::AboveMedian, k + 0.5, Polarity::HighRisk));
    std::vector<Cell> cells;
    for (int s : scores) cells.emplace_back(static_cast<double>(s));
    const Dataset d({VariableColumn("v", cells)}, scores.size());
    return build_flags(d, rules);
}

}  // namespace

TEST_CASE("build_flags definition cases") {
    const Dataset d({column("temperature", {35.0, 36.0, std::nullopt, 37.0})}, 4);
    const auto flags = build_flags(d, {make_rule("temperature", Side::BelowMedian, 36.0, Polarity::HighRisk)});
    CHECK(flags.bit(0, 0) == 1);
    CHECK(flags.bit(1, 0) == 0);
    CHECK(flags.bit(2, 0) == 0);
    CHECK(flags.bit(3, 0) == 0);
    CHECK(flags.high_count() == std::vector<int>{1, 0, 0, 0});

    const auto empty = build_flags(d, {});
    CHECK(empty.n_rules() == 0);
    CHECK(empty.scores() == std::vector<int>{0, 0, 0, 0});

    CHECK_THROWS_AS(build_flags(d, {make_rule("pressure", Side::BelowMedian, 1.0, Polarity::HighRisk)}),
                    UnknownVariable);
}

TEST_CASE("iris flag matrix and N-UFA training fit") {
    const auto iris = load_iris();
    const auto rules = detect_all(iris, DetectionConfig{}).rules;
    REQUIRE(rules.size() == 6);
    const auto flags = build_flags(iris, rules);
    CHECK(flags.n_rows() == 100);
    CHECK(flags.n_rules() == 6);
    // Every row is consistent with its recomputed bits.
    for (std::size_t r = 0; r < flags.n_rows(); ++r) {
        int hi = 0, lo = 0;
        for (std::size_t j = 0; j < rules.size(); ++j) {
            const auto& v = iris.variable(rules[j].variable)[r];
            const int bit = v && is_outside(*v, rules[j].cut, rules[j].direction);
            CHECK(flags.bit(r, j) == bit);
            (rules[j].polarity == Polarity::HighRisk ? hi : lo) += bit;
        }
        CHECK(flags.high_count()[r] == hi);
        CHECK(flags.low_count()[r] == lo);
    }
    const auto model = fit_nufa(flags, iris.target());
    const auto pred = predict_nufa(model, iris);
    CHECK(accuracy(pred.labels, iris.target()) >= 0.94);
}

TEST_CASE("fit_nufa examples") {
    // Class 1 at scores >= 3, class 0 at <= 1: b in {2, 3} both perfect, pick 2.
    auto flags = flags_with_scores({3, 4, 5, 0, 1, 1});
    auto model = fit_nufa(flags, target({1, 1, 1, 0, 0, 0}));
    CHECK(model.intercept == 2);
    CHECK(model.w_high == 1);
    CHECK(model.w_low == 1);

    // Constant score with majority class 0: predict all 0 through b = max + 1.
    flags = flags_with_scores({2, 2, 2, 2});
    model = fit_nufa(flags, target({0, 0, 0, 1}));
    CHECK(model.intercept == 3);

    CHECK_THROWS_AS(fit_nufa(flags, target({0, 0, 0, 0})), DegenerateTarget);
}

TEST_CASE("property: fitted intercept is optimal against a brute-force scan") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 60;
        std::vector<int> scores(n);
        std::vector<std::uint8_t> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<int>(gen() % 9);
            y[i] = gen() % 2;
        }
        y[0] = 0;
        y[1] = 1;
        const BinaryTarget t(y);
        const auto model = fit_nufa(flags_with_scores(scores), t);
        const std::size_t fitted = count_errors(scores, t, model.intercept);
        // Any integer intercept, well outside the score range too.
        for (int b = -20; b <= 30; ++b) CHECK(count_errors(scores, t, b) >= fitted);
        // Smallest optimal intercept within the searched range.
        const int lo = *std::min_element(scores.begin(), scores.end());
        for (int b = lo; b < model.intercept; ++b) CHECK(count_errors(scores, t, b) > fitted);
    }
}

TEST_CASE("predict_nufa definition cases") {
    std::vector<ThresholdRule> rules;
    std::vector<VariableColumn> cols;
    for (int k = 0; k < 5; ++k) {
        const auto name = "h" + std::to_string(k);
        rules.push_back(make_rule(name, Side::AboveMedian, 0.5, Polarity::HighRisk));
        cols.push_back(column(name, {1.0, std::nullopt}));
    }
    rules.push_back(make_rule("l", Side::BelowMedian, 0.5, Polarity::LowRisk));
    cols.push_back(column("l", {1.0, std::nullopt}));
    NUfaModel model{rules, 1, 1, 1};
    const Dataset d(cols, 2);
    auto p = predict_nufa(model, d);
    CHECK(p.scores[0] == 5);
    CHECK(p.labels[0] == 1);
    CHECK(p.scores[1] == 0);
    CHECK(p.labels[1] == 0);
    model.intercept = 0;
    CHECK(predict_nufa(model, d).labels[1] == 1);

    // Unrelated columns do not affect predictions.
    auto wider = cols;
    wider.push_back(column("unrelated", {-5.0, 99.0}));
    const auto q = predict_nufa(model, Dataset(wider, 2));
    CHECK(q.scores == predict_nufa(model, d).scores);

    CHECK_THROWS_AS(predict_nufa(model, Dataset({column("h0", {1.0})}, 1)), UnknownVariable);
}

TEST_CASE("auroc examples") {
    const auto y = target({0, 0, 1, 1});
    CHECK(auroc(std::vector<double>{0, 0, 1, 1}, y) == 1.0);
    CHECK(auroc(std::vector<double>{3, 3, 3, 3}, y) == 0.5);
    CHECK(auroc(std::vector<double>{1, 2, 3, 4}, target({0, 1, 0, 1})) == 0.75);
    CHECK_THROWS_AS(auroc(std::vector<double>{1, 2}, target({1, 1})), DegenerateTarget);
}

TEST_CASE("property: rank AUROC equals pairwise counting") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 199;
        std::vector<double> s(n);
        std::vector<std::uint8_t> y(n);
        const int levels = 1 + static_cast<int>(gen() % 20);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(gen() % levels);
            y[i] = gen() % 2;
        }
        y[0] = 0;
        y[1] = 1;
        const BinaryTarget t(y);
        CHECK(std::abs(auroc(s, t) - pairwise_auroc(s, t)) <= 1e-12);
    }
}

TEST_CASE("property: deleting a cell never turns a flag on") {
    std::mt19937_64 gen(21);
    const auto iris = load_iris();
    const auto rules = detect_all(iris, DetectionConfig{}).rules;
    const auto before = build_flags(iris, rules);
    for (int trial = 0; trial < 50; ++trial) {
        auto cols = iris.variables();
        const std::size_t j = gen() % cols.size();
        auto cells = cols[j].cells();
        for (int k = 0; k < 10; ++k) cells[gen() % cells.size()].reset();
        cols[j] = VariableColumn(cols[j].name(), cells);
        const auto after = build_flags(iris.with_variables(cols), rules);
        for (std::size_t r = 0; r < before.n_rows(); ++r) {
            for (std::size_t k = 0; k < rules.size(); ++k) CHECK(after.bit(r, k) <= before.bit(r, k));
            CHECK(after.high_count()[r] <= before.high_count()[r]);
            CHECK(after.low_count()[r] <= before.low_count()[r]);
        }
    }
}

TEST_CASE("stratified folds balance each class") {
    const auto iris = load_iris();
    const auto folds = stratified_folds(iris.target(), 5, SeededRng(4));
    for (std::size_t f = 0; f < 5; ++f) {
        std::size_t pos = 0, all = 0;
        for (std::size_t r = 0; r < folds.size(); ++r) {
            if (folds[r] != f) continue;
            ++all;
            pos += iris.target()[r];
        }
        CHECK(all == 20);
        CHECK(pos == 10);
    }
    CHECK_THROWS_AS(stratified_folds(iris.target(), 1, SeededRng(4)), InvalidArgument);
    CHECK_THROWS_AS(stratified_folds(target({0, 0, 1, 1, 1}), 3, SeededRng(4)), TooFewRows);
    CHECK_THROWS_AS(stratified_folds(target({0, 0, 0}), 2, SeededRng(4)), DegenerateTarget);
}

TEST_CASE("cross_validate: iris, determinism, null signal") {
    const auto iris = load_iris();
    const auto a = cross_validate(iris, DetectionConfig{}, 5, SeededRng(17));
    CHECK(a.per_fold.size() == 5);
    CHECK(a.ci_accuracy.first <= a.accuracy);
    CHECK(a.accuracy <= a.ci_accuracy.second);
    CHECK(a.ci_auroc.first <= a.auroc);
    CHECK(a.accuracy > 0.8);

    set_num_threads(1);
    const auto serial = cross_validate(iris, DetectionConfig{}, 5, SeededRng(17));
    set_num_threads(0);
    CHECK(serial.accuracy == a.accuracy);
    CHECK(serial.auroc == a.auroc);
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(serial.per_fold[f].accuracy == a.per_fold[f].accuracy);
        CHECK(serial.per_fold[f].intercept == a.per_fold[f].intercept);
    }

    const auto null = synthetic::null_signal(1000, 5, 0.5, 8);
    const auto r = cross_validate(null, DetectionConfig{}, 10, SeededRng(8));
    CHECK(std::abs(r.auroc - 0.5) < 0.06);
}

TEST_CASE("export_flags format and round trip") {
    const auto dir = scratch_dir("flags");
    const auto iris = load_iris();
    const auto rules = detect_all(iris, DetectionConfig{}).rules;
    const auto flags = build_flags(iris, rules);
    const auto path = (dir / "flags.csv").string();
    export_flags(flags, path, &iris.target());
    const auto text = read_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 101);
    const auto header = text.substr(0, text.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 8);
    CHECK(header.starts_with("Sepal.Length_LessThan_"));

    // Re-import and recount.
    const auto back = parse_csv(text, {"target"});
    for (std::size_t r = 0; r < flags.n_rows(); ++r) {
        int hi = 0, lo = 0;
        for (std::size_t j = 0; j < rules.size(); ++j) {
            const int bit = static_cast<int>(*back.variables()[j][r]);
            (rules[j].polarity == Polarity::HighRisk ? hi : lo) += bit;
        }
        CHECK(*back.variable("high_count")[r] == hi);
        CHECK(*back.variable("low_count")[r] == lo);
    }
    CHECK(back.target() == iris.target());

    export_flags(build_flags(iris, {}), path, &iris.target());
    const auto vacuous = read_file(path);
    CHECK(vacuous.substr(0, vacuous.find('\n')) == "high_count,low_count,target");

    CHECK_THROWS_AS(export_flags(flags, (dir / "no" / "such" / "dir.csv").string()), FileUnwritable);
    std::filesystem::remove_all(dir);
}
