#pragma once

// FactSheet accumulation, external pillar inputs, and the canonical
// trust_report.json / factsheet.json serialization.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedsust/emissions.hpp"
#include "fedsust/fedsim.hpp"
#include "fedsust/federation_config.hpp"
#include "fedsust/score_engine.hpp"
#include "fedsust/weights.hpp"

namespace fedsust {

inline constexpr const char* kToolName = "fedsust";
inline constexpr const char* kToolVersion = "0.1.0";

// ---- external pillars ------------------------------------------------------

// The six pillars scored outside this tool.
const std::vector<std::string>& external_pillar_ids();

// A pillar supplied either as a single score or as notion scores that are
// combined with equal weights.
struct PillarInput {
    std::optional<double> score;
    std::map<std::string, double> notions;
};

using PillarInputs = std::map<std::string, PillarInput>;

// Validates ids and ranges. Throws ValidationError on an unknown pillar or
// a value outside [0,1].
PillarInputs external_pillars(const std::map<std::string, double>& scores);
PillarInputs parse_pillar_inputs(const nlohmann::json& doc);
PillarInputs load_pillar_inputs(const std::filesystem::path& path);

// Root node over the sustainability pillar (when given) and the external
// pillars, all pillars equally weighted.
ScoreNode build_trust_tree(std::optional<ScoreNode> sustainability, const PillarInputs& external);

// ---- factsheet -------------------------------------------------------------

struct FactSheet {
    nlohmann::json pre_training;
    nlohmann::json during_training;
    nlohmann::json post_training;

    // Fields that are null, as "section.field".
    std::vector<std::string> absent_fields() const;
    double completeness() const;
    nlohmann::json to_json() const;
};

// Fills the three lifecycle sections. `simulation` and `scores` may be
// absent (static scoring); their fields are then marked null. In strict
// mode any absent field raises CompletenessError listing them.
FactSheet populate_factsheet(const FederationConfig& config, const SimulationResult* simulation,
                             const ScoreNode* scores, bool strict = false);

// ---- trust report ----------------------------------------------------------

struct EmissionsSummary {
    EmissionTotals total;
    std::map<std::string, EmissionTotals> by_phase;
    std::map<std::string, EmissionTotals> by_role;

    static EmissionsSummary from(const EmissionsLog& log);
    bool operator==(const EmissionsSummary&) const;
};

struct TrustReport {
    std::string tool_version = kToolVersion;
    std::string config_digest;
    bool partial = false;
    ScoreNode scores;  // aggregated root
    WeightConfig weights;
    std::optional<EmissionsSummary> emissions;
    nlohmann::json factsheet;  // null when not produced

    bool operator==(const TrustReport&) const;
};

// Canonical bytes: sorted keys, two-space indent, displayed scores rounded
// half-even to 2 decimals with the full value in a sibling `score_raw`,
// trailing newline.
std::string render_report(const TrustReport& report);
TrustReport parse_report(const std::string& bytes);

// Re-aggregates the report's own tree from its raw metric values.
double recompute_root(const TrustReport& report);

std::string render_json(const nlohmann::json& doc);

// Writes via a temporary file in the same directory and renames it over
// `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fedsust
