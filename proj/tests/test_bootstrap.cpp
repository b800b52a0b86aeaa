#include <cmath>
#include <numeric>

#include "doctest.h"
#include "test_util.hpp"
#include "ufa/bootstrap.hpp"
#include "ufa/errors.hpp"
#include "ufa/flags.hpp"
#include "ufa/parallel.hpp"
#include "ufa/synthetic.hpp"

using namespace ufa;
using namespace ufa::test;

TEST_CASE("distribution_mode examples") {
    const std::vector<double> point(20, 0.37);
    CHECK(std::abs(distribution_mode(point, 0.01) - 0.37) <= 0.005 + 1e-15);

    CHECK(distribution_mode(std::vector<double>{1, 1, 1, 9}, 1.0) == doctest::Approx(1.5));

    // 50/50 split across two bins: the bin nearer the point estimate wins.
    const std::vector<double> bimodal{1.0, 1.1, 1.2, 5.0, 5.1, 5.2};
    CHECK(distribution_mode(bimodal, 0.5, 5.05) == doctest::Approx(5.25));
    CHECK(distribution_mode(bimodal, 0.5, 1.05) == doctest::Approx(1.25));

    CHECK_THROWS_AS(distribution_mode(std::vector<double>{}, 1.0), EmptyDistribution);
    CHECK_THROWS_AS(distribution_mode(point, 0.0), InvalidArgument);
}

TEST_CASE("bootstrap on a planted step recovers the cut") {
    const DetectionConfig cfg;
    const auto data = synthetic::step(2000, 0.2, 31);
    const auto dists = bootstrap_thresholds(data, cfg, 100, SeededRng(31));
    REQUIRE(dists.size() == 2);
    const auto& below = dists[0];
    CHECK(below.side == Side::BelowMedian);
    CHECK(below.n_replicates == 100);
    CHECK(below.cuts.size() > 90);
    REQUIRE(below.mode.has_value());
    REQUIRE(below.point_estimate.has_value());
    const double width = segment_width(data.variables()[0], Side::BelowMedian, cfg);
    CHECK(std::abs(*below.mode - *below.point_estimate) <= width);
    CHECK(std::abs(*below.mode - 0.2) <= width);
    CHECK(std::is_sorted(below.cuts.begin(), below.cuts.end()));
    CHECK(*below.mode >= below.cuts.front());
    CHECK(*below.mode <= below.cuts.back());

    // Variance is the unbiased sample variance of the cuts.
    const double mean = std::accumulate(below.cuts.begin(), below.cuts.end(), 0.0) / below.cuts.size();
    double ss = 0;
    for (double c : below.cuts) ss += (c - mean) * (c - mean);
    const double var = ss / (below.cuts.size() - 1);
    CHECK(std::abs(below.variance - var) <= 1e-12 * std::max(var, 1e-300));
    CHECK(*below.mean == doctest::Approx(mean));

    // No significant AboveMedian rule exists in the step data.
    CHECK(dists[1].cuts.empty());
    CHECK_FALSE(dists[1].mode.has_value());
}

TEST_CASE("bootstrap on null data stays far below a planted signal") {
    // Chance significance from the max-|z| scan keeps null pairs well short of
    // the >90% recovery seen for a planted cut.
    const auto data = synthetic::null_signal(500, 4, 0.5, 2);
    const auto dists = bootstrap_thresholds(data, DetectionConfig{}, 40, SeededRng(2));
    std::size_t total = 0;
    for (const auto& d : dists) {
        total += d.cuts.size();
        CHECK(d.cuts.size() < 0.9 * 40);
    }
    CHECK(total < 0.5 * 8 * 40);
}

TEST_CASE("bootstrap is deterministic across thread counts") {
    synthetic::PlantedConfig pc;
    pc.n_rows = 800;
    pc.seed = 4;
    const auto data = synthetic::planted(pc);
    set_num_threads(1);
    const auto a = bootstrap_thresholds(data, DetectionConfig{}, 20, SeededRng(4));
    set_num_threads(6);
    const auto b = bootstrap_thresholds(data, DetectionConfig{}, 20, SeededRng(4));
    set_num_threads(0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cuts == b[i].cuts);
        CHECK(a[i].mode == b[i].mode);
        CHECK(a[i].variance == b[i].variance);
    }
    CHECK_THROWS_AS(bootstrap_thresholds(data, DetectionConfig{}, 0, SeededRng(4)), InvalidArgument);
}

TEST_CASE("every recorded cut satisfies support and significance on its replicate") {
    // Re-run replicate 0 by hand and compare with its contribution.
    const DetectionConfig cfg;
    const auto data = synthetic::step(400, 0.3, 12);
    const auto dists = bootstrap_thresholds(data, cfg, 1, SeededRng(12));
    SeededRng stream = SeededRng(12).derive(0);
    std::vector<std::size_t> rows(data.n_rows());
    for (auto& r : rows) r = stream.uniform_index(data.n_rows());
    const auto replicate = data.select_rows(rows);
    const auto rules = detect_all(replicate, cfg).rules;
    std::size_t recorded = 0;
    for (const auto& d : dists) recorded += d.cuts.size();
    CHECK(recorded == rules.size());
    for (const auto& r : rules) {
        CHECK(r.n_outside >= cfg.min_support);
        CHECK(r.significant);
    }
}

TEST_CASE("substitute_bootstrap_cuts") {
    const DetectionConfig cfg;
    const auto data = synthetic::step(2000, 0.2, 3);
    const auto rules = detect_all(data, cfg).rules;
    REQUIRE(rules.size() == 1);

    // Identity substitution: a distribution whose mode is the original cut.
    BootstrapDistribution same;
    same.variable = rules[0].variable;
    same.side = rules[0].side;
    same.cuts = {rules[0].cut};
    same.mode = rules[0].cut;
    auto sub = substitute_bootstrap_cuts(rules, {same}, data, cfg);
    REQUIRE(sub.rules.size() == 1);
    CHECK(sub.rules[0] == rules[0]);

    // Missing distribution: pass through with a warning.
    sub = substitute_bootstrap_cuts(rules, {}, data, cfg);
    CHECK(sub.rules == rules);
    CHECK(sub.warnings.size() == 1);

    // A mode outside the data range empties the region and drops the rule.
    BootstrapDistribution far = same;
    far.mode = -5.0;
    sub = substitute_bootstrap_cuts(rules, {far}, data, cfg);
    CHECK(sub.rules.empty());
    CHECK(sub.dropped == 1);

    // Real bootstrap: held-out AUROC barely moves.
    const auto test = synthetic::step(2000, 0.2, 4);
    const auto dists = bootstrap_thresholds(data, cfg, 100, SeededRng(3));
    sub = substitute_bootstrap_cuts(rules, dists, data, cfg);
    REQUIRE(sub.rules.size() == 1);
    const auto original_model = fit_nufa(build_flags(data, rules), data.target());
    const auto boot_model = fit_nufa(build_flags(data, sub.rules), data.target());
    const double auc_a = auroc(std::span<const int>(predict_nufa(original_model, test).scores), test.target());
    const double auc_b = auroc(std::span<const int>(predict_nufa(boot_model, test).scores), test.target());
    CHECK(std::abs(auc_a - auc_b) <= 0.01);
}
