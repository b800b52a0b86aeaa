#include "ufa/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ufa/errors.hpp"

namespace ufa {

Json to_json(const ThresholdRule& r) {
    Json j;
    j["variable"] = r.variable;
    j["side"] = to_string(r.side);
    j["direction"] = to_string(r.direction);
    j["cut"] = r.cut;
    j["n_outside"] = r.n_outside;
    j["p_outside"] = r.p_outside;
    j["n_iqr"] = r.n_iqr;
    j["p_iqr"] = r.p_iqr;
    j["z"] = r.z;
    j["significant"] = r.significant;
    j["polarity"] = to_string(r.polarity);
    return j;
}

ThresholdRule rule_from_json(const Json& j) {
    try {
        ThresholdRule r;
        r.variable = j.at("variable").get<std::string>();
        r.side = parse_side(j.at("side").get<std::string>());
        r.direction = parse_direction(j.at("direction").get<std::string>());
        r.cut = j.at("cut").get<double>();
        r.n_outside = j.at("n_outside").get<std::size_t>();
        r.p_outside = j.at("p_outside").get<double>();
        r.n_iqr = j.at("n_iqr").get<std::size_t>();
        r.p_iqr = j.at("p_iqr").get<double>();
        r.z = j.at("z").get<double>();
        r.significant = j.at("significant").get<bool>();
        r.polarity = parse_polarity(j.at("polarity").get<std::string>());
        if (r.direction != direction_of(r.side))
            throw InvalidArgument("rule for " + r.variable + " has inconsistent side and direction");
        return r;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed rule: ") + e.what());
    }
}

Json rules_to_json(const std::vector<ThresholdRule>& rules) {
    Json arr = Json::array();
    for (const auto& r : rules) arr.push_back(to_json(r));
    return arr;
}

std::vector<ThresholdRule> rules_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("rule set must be a JSON array");
    std::vector<ThresholdRule> out;
    for (const auto& e : j) out.push_back(rule_from_json(e));
    return out;
}

std::string rules_to_csv(const std::vector<ThresholdRule>& rules) {
    std::string out =
        "variable,side,direction,cut,n_outside,p_outside,n_iqr,p_iqr,z,significant,polarity\n";
    for (const auto& r : rules) {
        out += r.variable + "," + std::string(to_string(r.side)) + "," +
               std::string(to_string(r.direction)) + "," + format_real(r.cut) + "," +
               std::to_string(r.n_outside) + "," + format_real(r.p_outside) + "," +
               std::to_string(r.n_iqr) + "," + format_real(r.p_iqr) + "," + format_real(r.z) +
               "," + (r.significant ? "1" : "0") + "," + std::string(to_string(r.polarity)) + "\n";
    }
    return out;
}

std::string rules_table(const std::vector<ThresholdRule>& rules) {
    std::size_t name_w = 8;
    for (const auto& r : rules) name_w = std::max(name_w, r.variable.size());
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %-18s %6s %9s %7s %9s %4s\n", static_cast<int>(name_w),
                  "Variable", "Threshold", "N", "% Target", "ZStat", "ZStat.Abs", "Sig");
    os << line;
    for (const auto& r : rules) {
        char thr[64];
        std::snprintf(thr, sizeof thr, "%s %.4g",
                      r.direction == Direction::LessThan ? "Less Than" : "More Than", r.cut);
        std::snprintf(line, sizeof line, "%-*s  %-18s %6zu %8.1f%% %7.2f %9.2f %4d\n",
                      static_cast<int>(name_w), r.variable.c_str(), thr, r.n_outside,
                      100.0 * r.p_outside, r.z, std::abs(r.z), r.significant ? 1 : 0);
        os << line;
    }
    return os.str();
}

Json model_to_json(const NUfaModel& model) {
    Json j;
    j["w_high"] = model.w_high;
    j["w_low"] = model.w_low;
    j["intercept"] = model.intercept;
    j["rules"] = rules_to_json(model.rules);
    return j;
}

NUfaModel model_from_json(const Json& j) {
    try {
        NUfaModel m;
        m.w_high = j.value("w_high", 1);
        m.w_low = j.value("w_low", 1);
        if (m.w_high != 1 || m.w_low != 1) throw InvalidArgument("model weights must both be 1");
        m.intercept = j.at("intercept").get<int>();
        m.rules = rules_from_json(j.at("rules"));
        return m;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed model: ") + e.what());
    }
}

Json eval_to_json(const EvalReport& report) {
    Json j;
    j["folds"] = report.folds;
    j["accuracy"] = report.accuracy;
    j["auroc"] = report.auroc;
    j["ci_accuracy"] = {report.ci_accuracy.first, report.ci_accuracy.second};
    j["ci_auroc"] = {report.ci_auroc.first, report.ci_auroc.second};
    Json folds = Json::array();
    for (const auto& f : report.per_fold) {
        Json e;
        e["accuracy"] = f.accuracy;
        e["auroc"] = f.auroc;
        e["n_train"] = f.n_train;
        e["n_test"] = f.n_test;
        e["n_rules"] = f.n_rules;
        e["intercept"] = f.intercept;
        folds.push_back(std::move(e));
    }
    j["per_fold"] = std::move(folds);
    return j;
}

namespace {
Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
}  // namespace

Json bootstrap_to_json(const std::vector<BootstrapDistribution>& dists) {
    Json arr = Json::array();
    for (const auto& d : dists) {
        Json j;
        j["variable"] = d.variable;
        j["side"] = to_string(d.side);
        j["n_replicates"] = d.n_replicates;
        j["n_significant"] = d.cuts.size();
        j["bin_width"] = d.bin_width;
        j["point_estimate"] = optional_number(d.point_estimate);
        j["mode"] = optional_number(d.mode);
        j["mean"] = optional_number(d.mean);
        j["variance"] = d.variance;
        j["cuts"] = d.cuts;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileUnwritable(path);
    out << text;
    if (!out) throw FileUnwritable(path);
}

Json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidArgument("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace ufa
