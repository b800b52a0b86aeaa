// ufa: command-line driver for threshold detection, N-UFA evaluation,
// bootstrap stability and robustness sweeps.
//
// Exit codes: 0 success, 1 error (including usage errors), 2 success with an
// empty result.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ufa/bootstrap.hpp"
#include "ufa/core.hpp"
#include "ufa/errors.hpp"
#include "ufa/flags.hpp"
#include "ufa/parallel.hpp"
#include "ufa/robustness.hpp"
#include "ufa/serialize.hpp"
#include "ufa/synthetic.hpp"
#include "ufa/threshold.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kEmpty = 2;

struct RunConfig {
    std::string input;
    std::string target;
    std::string synthetic;
    std::size_t rows = 2000;
    double redundancy = 0.0;
    std::vector<std::string> missing_tokens = ufa::default_missing_tokens();
    ufa::DetectionConfig detection;
    std::uint64_t seed = 1;
    std::size_t folds = 10;
    std::string out = ".";
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, RunConfig& rc, bool with_folds) {
    cmd->add_option("--input", rc.input, "CSV file with a header row");
    cmd->add_option("--target", rc.target, "Name of the binary target column");
    cmd->add_option("--synthetic", rc.synthetic,
                    "Generate data instead of reading --input: step, planted, null or rare")
        ->check(CLI::IsMember({"step", "planted", "null", "rare"}));
    cmd->add_option("--rows", rc.rows, "Rows for --synthetic step/planted/null")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--redundancy", rc.redundancy,
                    "Share of --synthetic planted signal cells copied from a shared latent")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--missing", rc.missing_tokens, "Tokens read as missing cells")
        ->delimiter(',');
    cmd->add_option("--segments", rc.detection.n_segments, "Equal-length grid segments per side")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    cmd->add_option("--min-support", rc.detection.min_support, "Smallest outside-region support")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--critical", rc.detection.critical_value, "Critical |Z| for significance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", rc.seed, "Root seed");
    if (with_folds)
        cmd->add_option("--folds", rc.folds, "Cross-validation folds")
            ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    cmd->add_option("--out", rc.out, "Output directory");
    cmd->add_option("--threads", rc.threads, "Worker threads (0 = all cores)");
}

ufa::Dataset load_data(const RunConfig& rc) {
    if (!rc.synthetic.empty()) {
        if (!rc.input.empty()) throw ufa::InvalidArgument("--input and --synthetic are exclusive");
        ufa::Dataset data;
        if (rc.synthetic == "step") {
            data = ufa::synthetic::step(rc.rows, 0.2, rc.seed);
        } else if (rc.synthetic == "null") {
            data = ufa::synthetic::null_signal(rc.rows, 5, 0.5, rc.seed);
        } else if (rc.synthetic == "rare") {
            data = ufa::synthetic::planted(ufa::synthetic::rare_event_config(rc.seed));
        } else {
            ufa::synthetic::PlantedConfig pc;
            pc.n_rows = rc.rows;
            pc.seed = rc.seed;
            pc.redundancy = rc.redundancy;
            data = ufa::synthetic::planted(pc);
        }
        ufa::write_csv(data, (fs::path(rc.out) / "synthetic.csv").string());
        return data;
    }
    if (rc.input.empty()) throw ufa::InvalidArgument("--input (or --synthetic) is required");
    if (rc.target.empty()) throw ufa::InvalidArgument("--target is required");
    return ufa::load_csv(rc.input, {rc.target, rc.missing_tokens});
}

std::string out_path(const RunConfig& rc, const char* name) {
    return (fs::path(rc.out) / name).string();
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_detect(const RunConfig& rc) {
    const auto data = load_data(rc);
    const auto report = ufa::detect_all(data, rc.detection);
    print_warnings(report.warnings);

    const auto flags = ufa::build_flags(data, report.rules);
    ufa::write_text(out_path(rc, "rules.json"), ufa::dump(ufa::rules_to_json(report.rules)));
    ufa::write_text(out_path(rc, "rules.csv"), ufa::rules_to_csv(report.rules));
    ufa::export_flags(flags, out_path(rc, "flags.csv"), &data.target());

    std::cout << ufa::rules_table(report.rules);
    if (report.rules.empty()) {
        std::cout << "no significant thresholds\n";
        return kEmpty;
    }
    const auto model = ufa::fit_nufa(flags, data.target());
    ufa::write_text(out_path(rc, "model.json"), ufa::dump(ufa::model_to_json(model)));
    const auto pred = ufa::predict_nufa(model, data);
    std::printf("N-UFA intercept %d, training accuracy %.4f\n", model.intercept,
                ufa::accuracy(pred.labels, data.target()));
    return kOk;
}

int cmd_cv(const RunConfig& rc) {
    const auto data = load_data(rc);
    const auto report = ufa::cross_validate(data, rc.detection, rc.folds, ufa::SeededRng(rc.seed));
    ufa::write_text(out_path(rc, "eval.json"), ufa::dump(ufa::eval_to_json(report)));
    std::printf("%zu-fold cross-validation\n", report.folds);
    std::printf("accuracy %.4f (%.4f, %.4f)\n", report.accuracy, report.ci_accuracy.first,
                report.ci_accuracy.second);
    std::printf("AUROC    %.4f (%.4f, %.4f)\n", report.auroc, report.ci_auroc.first,
                report.ci_auroc.second);
    return kOk;
}

int cmd_bootstrap(const RunConfig& rc, std::size_t replicates, bool substitute) {
    const auto data = load_data(rc);
    const auto dists =
        ufa::bootstrap_thresholds(data, rc.detection, replicates, ufa::SeededRng(rc.seed));
    ufa::write_text(out_path(rc, "bootstrap.json"), ufa::dump(ufa::bootstrap_to_json(dists)));

    bool any = false;
    for (const auto& d : dists) {
        if (d.cuts.empty()) continue;
        any = true;
        std::printf("%-16s %-11s %4zu/%zu  mode %.6g  mean %.6g  var %.4g\n", d.variable.c_str(),
                    std::string(ufa::to_string(d.side)).c_str(), d.cuts.size(), d.n_replicates,
                    *d.mode, *d.mean, d.variance);
    }
    if (substitute) {
        const auto rules = ufa::detect_all(data, rc.detection).rules;
        const auto sub = ufa::substitute_bootstrap_cuts(rules, dists, data, rc.detection);
        print_warnings(sub.warnings);
        ufa::write_text(out_path(rc, "rules_boot.json"), ufa::dump(ufa::rules_to_json(sub.rules)));
        std::printf("substituted rules: %zu of %zu kept\n", sub.rules.size(), rules.size());
    }
    return any ? kOk : kEmpty;
}

int cmd_perturb(const RunConfig& rc, const std::string& kind, const std::vector<double>& fractions) {
    const auto data = load_data(rc);
    const auto report = ufa::robustness_sweep(data, rc.detection, ufa::parse_corruption_kind(kind),
                                              fractions, rc.folds, ufa::SeededRng(rc.seed));
    print_warnings(report.warnings);
    const auto csv = ufa::sweep_to_csv(report);
    ufa::write_text(out_path(rc, "sweep.csv"), csv);
    std::cout << csv;
    return kOk;
}

int cmd_predict(const RunConfig& rc, const std::string& model_path) {
    const auto model = ufa::model_from_json(ufa::read_json(model_path));
    if (rc.input.empty()) throw ufa::InvalidArgument("--input is required");
    const auto data = ufa::load_csv(rc.input, {rc.target, rc.missing_tokens});

    std::set<std::string> missing;
    for (const auto& r : model.rules)
        if (!data.find(r.variable)) missing.insert(r.variable);
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw ufa::InvalidArgument("input lacks rule variables: " + list);
    }

    const auto pred = ufa::predict_nufa(model, data);
    std::string csv = "row,label,score,high_count,low_count";
    if (data.is_labeled()) csv += ",target";
    csv += "\n";
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        csv += std::to_string(r + 1) + "," + std::to_string(pred.labels[r]) + "," +
               std::to_string(pred.scores[r]) + "," + std::to_string(pred.high_count[r]) + "," +
               std::to_string(pred.low_count[r]);
        if (data.is_labeled()) csv += "," + std::to_string(data.target()[r]);
        csv += "\n";
    }
    ufa::write_text(out_path(rc, "predictions.csv"), csv);
    std::printf("scored %zu rows\n", data.n_rows());
    if (data.is_labeled())
        std::printf("accuracy %.4f\n", ufa::accuracy(pred.labels, data.target()));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Univariate flagging: threshold detection and flag-count classification"};
    app.require_subcommand(1);

    RunConfig rc;
    std::size_t replicates = 100;
    bool substitute = false;
    std::string kind = "missing";
    std::vector<double> fractions{0.0, 0.05, 0.1, 0.25, 0.5};
    std::string model_path;

    auto* detect = app.add_subcommand("detect", "Find significant thresholds; writes rules.json, "
                                                "rules.csv, flags.csv and model.json");
    add_common(detect, rc, false);

    auto* cv = app.add_subcommand("cv", "Stratified k-fold evaluation of N-UFA; writes eval.json");
    add_common(cv, rc, true);

    auto* boot = app.add_subcommand("bootstrap", "Bootstrap threshold distributions; writes "
                                                 "bootstrap.json (+ rules_boot.json)");
    add_common(boot, rc, false);
    boot->add_option("--replicates", replicates, "Bootstrap replicates")
        ->check(CLI::PositiveNumber);
    boot->add_flag("--substitute", substitute, "Replace each cut with its bootstrap mode");

    auto* perturb = app.add_subcommand("perturb", "Missing/noise robustness sweep; writes sweep.csv");
    add_common(perturb, rc, true);
    perturb->add_option("--kind", kind, "missing or noise")
        ->check(CLI::IsMember({"missing", "noise"}));
    perturb->add_option("--fractions", fractions, "Comma-separated corruption fractions")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));

    auto* predict = app.add_subcommand("predict", "Score rows with a saved model; writes "
                                                  "predictions.csv");
    predict->add_option("--model,--rules", model_path, "model.json written by detect")->required();
    predict->add_option("--input", rc.input, "CSV to score")->required();
    predict->add_option("--target", rc.target, "Optional target column for accuracy");
    predict->add_option("--missing", rc.missing_tokens, "Tokens read as missing cells")
        ->delimiter(',');
    predict->add_option("--out", rc.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kError;
    }

    try {
        ufa::set_num_threads(rc.threads);
        fs::create_directories(rc.out);
        if (detect->parsed()) return cmd_detect(rc);
        if (cv->parsed()) return cmd_cv(rc);
        if (boot->parsed()) return cmd_bootstrap(rc, replicates, substitute);
        if (perturb->parsed()) return cmd_perturb(rc, kind, fractions);
        if (predict->parsed()) return cmd_predict(rc, model_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
