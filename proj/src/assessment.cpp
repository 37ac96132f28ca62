#include "fedsust/assessment.hpp"

#include <cmath>

#include "fedsust/errors.hpp"

namespace fedsust {

using nlohmann::json;

namespace {

ProposalScores proposal_scores(const FederationConfig& config, const PillarInputs& pillars,
                               const ReferenceData& ref, const AssessmentOptions& options) {
    AssessmentOptions opts = options;
    opts.pillars = pillars;
    ScoreNode tree = score_tree(config, ref, opts);
    ProposalScores out;
    out.trust = *tree.score;
    for (const auto& p : tree.children) out.pillars[p.id] = *p.score;
    if (!pillars.empty()) {
        ScoreNode external = build_trust_tree(std::nullopt, pillars);
        out.trust_without_sustainability =
            aggregate(external, {.allow_partial = options.allow_partial});
    }
    return out;
}

json scores_json(const ProposalScores& s) {
    json pillars = json::object();
    for (const auto& [id, v] : s.pillars) {
        pillars[id] = {{"score", round_display(v)}, {"score_raw", v}};
    }
    json j = {{"trust_score", round_display(s.trust)}, {"trust_score_raw", s.trust},
              {"pillars", pillars}};
    if (s.trust_without_sustainability) {
        j["trust_score_without_sustainability"] = round_display(*s.trust_without_sustainability);
        j["trust_score_without_sustainability_raw"] = *s.trust_without_sustainability;
    } else {
        j["trust_score_without_sustainability"] = nullptr;
        j["trust_score_without_sustainability_raw"] = nullptr;
    }
    return j;
}

}  // namespace

ScoreNode score_tree(const FederationConfig& config, const ReferenceData& ref,
                     const AssessmentOptions& options) {
    const auto assessment = assess_sustainability(config, ref);
    ScoreNode tree = build_trust_tree(build_sustainability_pillar(assessment), options.pillars);
    if (!options.weights.empty()) apply_weights(tree, options.weights);
    aggregate(tree, {.allow_partial = options.allow_partial});
    return tree;
}

TrustReport assess_config(const FederationConfig& config, const ReferenceData& ref,
                          const AssessmentOptions& options) {
    TrustReport report;
    report.config_digest = config_digest(config);
    report.scores = score_tree(config, ref, options);
    report.partial = report.scores.partial;
    report.weights = collect_weights(report.scores);
    report.factsheet = populate_factsheet(config, nullptr, &report.scores).to_json();
    return report;
}

FederationRun run_federation(const FederationConfig& config, const ReferenceData& ref,
                             const AssessmentOptions& options,
                             const SimulationOptions& sim_options) {
    // Score first: a missing metric or reference miss aborts before any work.
    ScoreNode tree = score_tree(config, ref, options);

    FederationRun run;
    run.simulation = simulate_federation(config, ref, sim_options);
    run.factsheet = populate_factsheet(config, &run.simulation, &tree);

    TrustReport& report = run.report;
    report.config_digest = config_digest(config);
    report.scores = std::move(tree);
    report.partial = report.scores.partial;
    report.weights = collect_weights(report.scores);
    report.emissions = EmissionsSummary::from(run.simulation.state.emissions);
    report.factsheet = run.factsheet.to_json();
    return run;
}

Comparison compare_proposals(const FederationConfig& a, const PillarInputs& pillars_a,
                             const FederationConfig& b, const PillarInputs& pillars_b,
                             const ReferenceData& ref, const AssessmentOptions& options) {
    Comparison c;
    c.a = proposal_scores(a, pillars_a, ref, options);
    c.b = proposal_scores(b, pillars_b, ref, options);
    for (const auto& [id, va] : c.a.pillars) {
        const auto it = c.b.pillars.find(id);
        if (it != c.b.pillars.end()) c.pillar_deltas[id] = it->second - va;
    }
    c.trust_delta = c.b.trust - c.a.trust;
    c.winner = c.trust_delta == 0.0 ? "tie" : (c.trust_delta > 0.0 ? "B" : "A");
    return c;
}

json to_json(const Comparison& c) {
    json deltas = json::object();
    for (const auto& [id, d] : c.pillar_deltas) deltas[id] = d;
    return {{"a", scores_json(c.a)},
            {"b", scores_json(c.b)},
            {"pillar_deltas", deltas},
            {"trust_delta", c.trust_delta},
            {"winner", c.winner}};
}

}  // namespace fedsust
