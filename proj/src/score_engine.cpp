#include "fedsust/score_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <utility>

#include "fedsust/errors.hpp"

namespace fedsust {

namespace {

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(what) + ": value must be finite");
    }
}

void require_bounds(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ValidationError("normalization bounds require lo < hi (got lo=" +
                              std::to_string(lo) + ", hi=" + std::to_string(hi) + ")");
    }
}

void validate_anchors(std::span<const Anchor> anchors) {
    if (anchors.size() < 2) {
        throw ValidationError("log-bucket rule needs at least two anchors");
    }
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const Anchor& a = anchors[i];
        if (!(a.raw > 0.0) || !std::isfinite(a.raw)) {
            throw ValidationError("log-bucket anchor raw values must be positive");
        }
        if (!(a.normalized >= 0.0 && a.normalized <= 1.0)) {
            throw ValidationError("log-bucket anchor normalized values must lie in [0,1]");
        }
        if (i > 0 && !(anchors[i - 1].raw < a.raw)) {
            throw ValidationError("log-bucket anchors must be strictly increasing");
        }
    }
}

std::vector<Anchor> decade_anchors(int first_exponent) {
    std::vector<Anchor> anchors;
    for (int i = 0; i < 6; ++i) {
        anchors.push_back({std::pow(10.0, first_exponent + i), 1.0 - 0.2 * i});
    }
    anchors.back().normalized = 0.0;
    return anchors;
}

}  // namespace

double normalize_linear_inverse(double value, double lo, double hi) {
    require_finite(value, "linear-inverse");
    require_bounds(lo, hi);
    return std::clamp((hi - value) / (hi - lo), 0.0, 1.0);
}

double normalize_linear_direct(double value, double lo, double hi) {
    require_finite(value, "linear-direct");
    require_bounds(lo, hi);
    return std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
}

double normalize_log_buckets(double value, std::span<const Anchor> anchors) {
    require_finite(value, "log-bucket");
    if (!(value > 0.0)) {
        throw ValidationError("log-bucket: value must be positive");
    }
    validate_anchors(anchors);
    if (value <= anchors.front().raw) return anchors.front().normalized;
    if (value >= anchors.back().raw) return anchors.back().normalized;

    const double x = std::log10(value);
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        if (value <= anchors[i].raw) {
            const double x0 = std::log10(anchors[i - 1].raw);
            const double x1 = std::log10(anchors[i].raw);
            const double t = (x - x0) / (x1 - x0);
            const double y0 = anchors[i - 1].normalized;
            const double y1 = anchors[i].normalized;
            return std::clamp(y0 + t * (y1 - y0), 0.0, 1.0);
        }
    }
    return anchors.back().normalized;  // unreachable
}

double normalize_selection_rate(double rate) {
    require_finite(rate, "selection-rate");
    if (rate < 0.0 || rate > 1.0) {
        throw ValidationError("selection-rate: rate must lie in [0,1]");
    }
    return std::clamp((1.0 - rate) / 0.9, 0.0, 1.0);
}

std::vector<Anchor> count_anchors() { return decade_anchors(1); }
std::vector<Anchor> size_anchors() { return decade_anchors(5); }

NormalizationRule NormalizationRule::linear_inverse(double lo, double hi) {
    NormalizationRule r;
    r.kind = Kind::linear_inverse;
    r.lo = lo;
    r.hi = hi;
    r.validate();
    return r;
}

NormalizationRule NormalizationRule::linear_direct(double lo, double hi) {
    NormalizationRule r;
    r.kind = Kind::linear_direct;
    r.lo = lo;
    r.hi = hi;
    r.validate();
    return r;
}

NormalizationRule NormalizationRule::log_bucket(std::vector<Anchor> anchors) {
    NormalizationRule r;
    r.kind = Kind::log_bucket;
    r.anchors = std::move(anchors);
    r.lo = r.anchors.empty() ? 0.0 : r.anchors.front().raw;
    r.hi = r.anchors.empty() ? 0.0 : r.anchors.back().raw;
    r.validate();
    return r;
}

NormalizationRule NormalizationRule::selection_rate() {
    NormalizationRule r;
    r.kind = Kind::selection_rate;
    r.lo = 0.0;
    r.hi = 1.0;
    return r;
}

NormalizationRule NormalizationRule::identity() {
    NormalizationRule r;
    r.kind = Kind::identity;
    return r;
}

void NormalizationRule::validate() const {
    switch (kind) {
        case Kind::linear_inverse:
        case Kind::linear_direct:
            require_bounds(lo, hi);
            break;
        case Kind::log_bucket:
            validate_anchors(anchors);
            break;
        case Kind::selection_rate:
        case Kind::identity:
            break;
    }
}

double NormalizationRule::apply(double value) const {
    switch (kind) {
        case Kind::linear_inverse:
            return normalize_linear_inverse(value, lo, hi);
        case Kind::linear_direct:
            return normalize_linear_direct(value, lo, hi);
        case Kind::log_bucket:
            return normalize_log_buckets(value, anchors);
        case Kind::selection_rate:
            return normalize_selection_rate(value);
        case Kind::identity:
            require_finite(value, "identity");
            if (value < 0.0 || value > 1.0) {
                throw ValidationError("identity rule: value must lie in [0,1]");
            }
            return value;
    }
    return 0.0;
}

std::string_view to_string(NormalizationRule::Kind kind) {
    switch (kind) {
        case NormalizationRule::Kind::linear_inverse: return "linear-inverse";
        case NormalizationRule::Kind::linear_direct: return "linear-direct";
        case NormalizationRule::Kind::log_bucket: return "log-bucket";
        case NormalizationRule::Kind::selection_rate: return "selection-rate";
        case NormalizationRule::Kind::identity: return "identity";
    }
    return "unknown";
}

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::metric: return "metric";
        case NodeKind::notion: return "notion";
        case NodeKind::pillar: return "pillar";
        case NodeKind::root: return "root";
    }
    return "unknown";
}

ScoreNode ScoreNode::metric(std::string id, double weight, NormalizationRule rule,
                            std::optional<double> raw) {
    ScoreNode n;
    n.id = std::move(id);
    n.kind = NodeKind::metric;
    n.weight = weight;
    n.rule = std::move(rule);
    n.raw = raw;
    return n;
}

ScoreNode ScoreNode::group(std::string id, NodeKind kind, double weight,
                           std::vector<ScoreNode> children) {
    ScoreNode n;
    n.id = std::move(id);
    n.kind = kind;
    n.weight = weight;
    n.children = std::move(children);
    return n;
}

const ScoreNode* ScoreNode::find(std::string_view node_id) const {
    if (id == node_id) return this;
    for (const auto& child : children) {
        if (const ScoreNode* hit = child.find(node_id)) return hit;
    }
    return nullptr;
}

ScoreNode* ScoreNode::find(std::string_view node_id) {
    return const_cast<ScoreNode*>(std::as_const(*this).find(node_id));
}

void validate_tree(const ScoreNode& node) {
    if (!(node.weight >= 0.0 && node.weight <= 1.0)) {
        throw ValidationError("weight of '" + node.id + "' must lie in [0,1]");
    }
    if (node.is_leaf()) {
        if (!node.children.empty()) {
            throw ValidationError("metric node '" + node.id + "' must not have children");
        }
        if (!node.rule) {
            throw ValidationError("metric node '" + node.id + "' has no normalization rule");
        }
        node.rule->validate();
        return;
    }
    if (node.children.empty()) {
        throw ValidationError("node '" + node.id + "' must have at least one child");
    }
    double sum = 0.0;
    for (const auto& child : node.children) {
        validate_tree(child);
        sum += child.weight;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", sum);
        throw ValidationError("child weights of '" + node.id + "' sum to " + buf +
                              ", expected 1");
    }
}

namespace {

std::optional<double> aggregate_node(ScoreNode& node, const AggregateOptions& options) {
    node.partial = false;
    node.score.reset();
    if (node.is_leaf()) {
        if (!node.raw) {
            if (options.allow_partial) return std::nullopt;
            throw MissingMetricError(node.id);
        }
        node.score = node.rule->apply(*node.raw);
        return node.score;
    }

    double weighted = 0.0;
    double present_weight = 0.0;
    bool any_missing = false;
    for (auto& child : node.children) {
        const auto s = aggregate_node(child, options);
        if (!s) {
            any_missing = true;
            continue;
        }
        any_missing = any_missing || child.partial;
        weighted += child.weight * *s;
        present_weight += child.weight;
    }
    if (present_weight <= 0.0) {
        node.partial = true;
        return std::nullopt;
    }
    node.partial = any_missing;
    const double value = any_missing ? weighted / present_weight : weighted;
    node.score = std::clamp(value, 0.0, 1.0);
    return node.score;
}

}  // namespace

double aggregate(ScoreNode& node, const AggregateOptions& options) {
    validate_tree(node);
    const auto s = aggregate_node(node, options);
    if (!s) {
        throw MissingMetricError(node.id);
    }
    return *s;
}

double trust_score(std::span<const double> pillar_scores, std::span<const double> weights) {
    if (pillar_scores.size() != weights.size()) {
        throw ValidationError("trust score: " + std::to_string(pillar_scores.size()) +
                              " pillar scores but " + std::to_string(weights.size()) +
                              " weights");
    }
    if (pillar_scores.empty()) {
        throw ValidationError("trust score: no pillars");
    }
    double sum_w = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
            throw ValidationError("trust score: weights must be non-negative");
        }
        if (!(pillar_scores[i] >= 0.0 && pillar_scores[i] <= 1.0)) {
            throw ValidationError("trust score: pillar scores must lie in [0,1]");
        }
        sum_w += weights[i];
        acc += weights[i] * pillar_scores[i];
    }
    if (std::abs(sum_w - 1.0) > kWeightSumTolerance) {
        throw ValidationError("trust score: weights must sum to 1");
    }
    return std::clamp(acc, 0.0, 1.0);
}

double round_display(double value) {
    const double scaled = value * 100.0;
    double whole = std::floor(scaled);
    const double frac = scaled - whole;
    if (frac > 0.5 || (frac == 0.5 && std::fmod(whole, 2.0) != 0.0)) {
        whole += 1.0;
    }
    return whole / 100.0;
}

std::string format_display(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", round_display(value));
    return buf;
}

}  // namespace fedsust
