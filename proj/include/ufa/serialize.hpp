#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ufa/bootstrap.hpp"
#include "ufa/flags.hpp"
#include "ufa/threshold.hpp"

namespace ufa {

using Json = nlohmann::ordered_json;

Json to_json(const ThresholdRule& rule);
ThresholdRule rule_from_json(const Json& j);

Json rules_to_json(const std::vector<ThresholdRule>& rules);
std::vector<ThresholdRule> rules_from_json(const Json& j);

/// Same columns as the JSON export, one rule per line.
std::string rules_to_csv(const std::vector<ThresholdRule>& rules);

/// Aligned text table: Variable, Threshold ("Less Than c" / "More Than c"),
/// N, outcome rate, ZStat, ZStat.Abs, Sig.
std::string rules_table(const std::vector<ThresholdRule>& rules);

Json model_to_json(const NUfaModel& model);
NUfaModel model_from_json(const Json& j);

Json eval_to_json(const EvalReport& report);
Json bootstrap_to_json(const std::vector<BootstrapDistribution>& dists);

/// Dumps with a trailing newline. Doubles use the shortest round-trip form.
std::string dump(const Json& j);
void write_text(const std::string& path, const std::string& text);
Json read_json(const std::string& path);

}  // namespace ufa
