#pragma once

// End-to-end flows behind the CLI: static scoring of a scenario, a full
// simulated federation run, and the comparison of two proposals.

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "fedsust/fedsim.hpp"
#include "fedsust/report.hpp"
#include "fedsust/sustainability.hpp"

namespace fedsust {

struct AssessmentOptions {
    WeightConfig weights;
    PillarInputs pillars;
    bool allow_partial = false;
};

// Builds the trust tree for `config` (sustainability + external pillars),
// applies weight overrides and aggregates it.
ScoreNode score_tree(const FederationConfig& config, const ReferenceData& ref,
                     const AssessmentOptions& options);

// Static assessment from configuration alone; no emissions estimate.
TrustReport assess_config(const FederationConfig& config, const ReferenceData& ref,
                          const AssessmentOptions& options);

struct FederationRun {
    SimulationResult simulation;
    TrustReport report;
    FactSheet factsheet;
};

FederationRun run_federation(const FederationConfig& config, const ReferenceData& ref,
                             const AssessmentOptions& options,
                             const SimulationOptions& sim_options = {});

struct ProposalScores {
    double trust = 0.0;                          // all pillars
    std::optional<double> trust_without_sustainability;  // external pillars only
    std::map<std::string, double> pillars;       // full-precision pillar scores
};

struct Comparison {
    ProposalScores a;
    ProposalScores b;
    std::map<std::string, double> pillar_deltas;  // b - a
    double trust_delta = 0.0;                     // b - a
    std::string winner;                           // "A", "B" or "tie"
};

Comparison compare_proposals(const FederationConfig& a, const PillarInputs& pillars_a,
                             const FederationConfig& b, const PillarInputs& pillars_b,
                             const ReferenceData& ref, const AssessmentOptions& options);

nlohmann::json to_json(const Comparison& comparison);

}  // namespace fedsust
