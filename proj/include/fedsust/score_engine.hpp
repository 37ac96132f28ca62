#pragma once

// Normalization primitives and weighted hierarchical aggregation.
//
// Scores flow bottom-up through a tree of ScoreNode:
//   metric -> notion -> pillar -> root (trust)
// Metric nodes normalize a raw value into [0,1]; every other node is the
// weighted sum of its children. All arithmetic is carried at full double
// precision; two-decimal rounding is applied only when a value is displayed.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedsust {

struct Anchor {
    double raw;
    double normalized;

    bool operator==(const Anchor&) const = default;
};

struct NormalizationRule {
    enum class Kind { linear_inverse, linear_direct, log_bucket, selection_rate, identity };

    Kind kind = Kind::identity;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<Anchor> anchors;  // log_bucket only

    static NormalizationRule linear_inverse(double lo, double hi);
    static NormalizationRule linear_direct(double lo, double hi);
    static NormalizationRule log_bucket(std::vector<Anchor> anchors);
    static NormalizationRule selection_rate();
    static NormalizationRule identity();

    // Throws ValidationError when the rule's own parameters are inconsistent.
    void validate() const;
    double apply(double value) const;

    bool operator==(const NormalizationRule&) const = default;
};

std::string_view to_string(NormalizationRule::Kind kind);

double normalize_linear_inverse(double value, double lo, double hi);
double normalize_linear_direct(double value, double lo, double hi);
double normalize_log_buckets(double value, std::span<const Anchor> anchors);
double normalize_selection_rate(double rate);

// The two anchor sets used by the federation-complexity metrics.
std::vector<Anchor> count_anchors();  // 10^1 .. 10^6 -> 1 .. 0
std::vector<Anchor> size_anchors();   // 10^5 .. 10^10 -> 1 .. 0

enum class NodeKind { metric, notion, pillar, root };

std::string_view to_string(NodeKind kind);

struct ScoreNode {
    std::string id;  // dot-path, e.g. "sustainability.carbon_intensity.client"
    NodeKind kind = NodeKind::metric;
    double weight = 1.0;
    std::optional<NormalizationRule> rule;
    std::vector<ScoreNode> children;
    std::optional<double> raw;
    std::optional<double> score;
    // Set by partial aggregation when some descendant metric was missing.
    bool partial = false;

    static ScoreNode metric(std::string id, double weight, NormalizationRule rule,
                            std::optional<double> raw = std::nullopt);
    static ScoreNode group(std::string id, NodeKind kind, double weight,
                           std::vector<ScoreNode> children);

    bool is_leaf() const { return kind == NodeKind::metric; }
    const ScoreNode* find(std::string_view node_id) const;
    ScoreNode* find(std::string_view node_id);

    bool operator==(const ScoreNode&) const = default;
};

inline constexpr double kWeightSumTolerance = 1e-9;

// Structural checks: metric nodes are leaves with a rule, groups have at
// least one child, and sibling weights sum to 1.
void validate_tree(const ScoreNode& node);

struct AggregateOptions {
    // When set, a missing metric is dropped and its siblings' weights are
    // renormalized; affected ancestors are flagged `partial`.
    bool allow_partial = false;
};

// Computes and stores the score on every node under `node`, returns the
// root score. Throws MissingMetricError (strict mode) naming the first
// unset leaf.
double aggregate(ScoreNode& node, const AggregateOptions& options = {});

// Weighted mean of pillar scores.
double trust_score(std::span<const double> pillar_scores, std::span<const double> weights);

// Round half to even at two decimals, for display.
double round_display(double value);
std::string format_display(double value);

}  // namespace fedsust
