#include "fedsust/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <unistd.h>

#include "fedsust/errors.hpp"
#include "fedsust/sustainability.hpp"

namespace fedsust {

using nlohmann::json;

// ---- external pillars ------------------------------------------------------

const std::vector<std::string>& external_pillar_ids() {
    static const std::vector<std::string> ids = {"accountability", "explainability", "fairness",
                                                 "federation",     "privacy",        "robustness"};
    return ids;
}

namespace {

bool is_external_pillar(const std::string& id) {
    const auto& ids = external_pillar_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

double unit_value(const json& v, const std::string& where) {
    if (!v.is_number()) throw ValidationError("pillars: '" + where + "' must be a number");
    const double d = v.get<double>();
    if (!(d >= 0.0 && d <= 1.0)) {
        throw ValidationError("pillars: '" + where + "' must lie in [0,1]");
    }
    return d;
}

}  // namespace

PillarInputs external_pillars(const std::map<std::string, double>& scores) {
    PillarInputs out;
    for (const auto& [id, value] : scores) {
        if (!is_external_pillar(id)) throw ValidationError("pillars: unknown pillar '" + id + "'");
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ValidationError("pillars: '" + id + "' must lie in [0,1]");
        }
        out[id].score = value;
    }
    return out;
}

PillarInputs parse_pillar_inputs(const json& doc) {
    if (!doc.is_object()) throw ValidationError("pillars: top-level value must be an object");
    PillarInputs out;
    for (const auto& [id, value] : doc.items()) {
        if (!is_external_pillar(id)) throw ValidationError("pillars: unknown pillar '" + id + "'");
        PillarInput p;
        if (value.is_number()) {
            p.score = unit_value(value, id);
        } else if (value.is_object()) {
            for (const auto& [key, v] : value.items()) {
                if (key == "score") {
                    p.score = unit_value(v, id + ".score");
                } else if (key == "notions") {
                    if (!v.is_object() || v.empty()) {
                        throw ValidationError("pillars: '" + id + ".notions' must be a non-empty object");
                    }
                    for (const auto& [notion, s] : v.items()) {
                        p.notions[notion] = unit_value(s, id + ".notions." + notion);
                    }
                } else {
                    throw ValidationError("pillars: unknown key '" + id + "." + key + "'");
                }
            }
            if (p.score && !p.notions.empty()) {
                throw ValidationError("pillars: '" + id + "' gives both a score and notions");
            }
            if (!p.score && p.notions.empty()) {
                throw ValidationError("pillars: '" + id + "' needs a score or notions");
            }
        } else {
            throw ValidationError("pillars: '" + id + "' must be a number or object");
        }
        out[id] = std::move(p);
    }
    return out;
}

PillarInputs load_pillar_inputs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("pillars: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("pillars: " + path.string() + ": " + e.what());
    }
    return parse_pillar_inputs(doc);
}

ScoreNode build_trust_tree(std::optional<ScoreNode> sustainability, const PillarInputs& external) {
    const std::size_t count = external.size() + (sustainability ? 1 : 0);
    if (count == 0) throw ValidationError("trust tree: no pillars");
    const double w = 1.0 / static_cast<double>(count);

    std::vector<ScoreNode> pillars;
    if (sustainability) {
        sustainability->weight = w;
        pillars.push_back(std::move(*sustainability));
    }
    for (const auto& [id, input] : external) {
        std::vector<ScoreNode> leaves;
        if (input.score) {
            leaves.push_back(
                ScoreNode::metric(id + ".score", 1.0, NormalizationRule::identity(), input.score));
        } else {
            const double nw = 1.0 / static_cast<double>(input.notions.size());
            for (const auto& [notion, value] : input.notions) {
                leaves.push_back(
                    ScoreNode::metric(id + "." + notion, nw, NormalizationRule::identity(), value));
            }
        }
        pillars.push_back(ScoreNode::group(id, NodeKind::pillar, w, std::move(leaves)));
    }
    return ScoreNode::group(ids::kTrust, NodeKind::root, 1.0, std::move(pillars));
}

// ---- factsheet -------------------------------------------------------------

namespace {

json summary_stats(const std::vector<double>& v) {
    if (v.empty()) return nullptr;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return {{"mean", mean}, {"min", *lo}, {"max", *hi}};
}

json totals_json(const EmissionTotals& t) {
    return {{"co2eq_g", t.co2eq_g}, {"energy_kwh", t.energy_kwh}, {"records", t.records}};
}

EmissionTotals totals_from(const json& j) {
    EmissionTotals t;
    t.co2eq_g = j.at("co2eq_g").get<double>();
    t.energy_kwh = j.at("energy_kwh").get<double>();
    t.records = j.at("records").get<std::size_t>();
    return t;
}

json emissions_json(const EmissionsSummary& s) {
    json by_phase = json::object();
    for (const auto& [k, v] : s.by_phase) by_phase[k] = totals_json(v);
    json by_role = json::object();
    for (const auto& [k, v] : s.by_role) by_role[k] = totals_json(v);
    return {{"total", totals_json(s.total)}, {"by_phase", by_phase}, {"by_role", by_role}};
}

EmissionsSummary emissions_from(const json& j) {
    EmissionsSummary s;
    s.total = totals_from(j.at("total"));
    for (const auto& [k, v] : j.at("by_phase").items()) s.by_phase[k] = totals_from(v);
    for (const auto& [k, v] : j.at("by_role").items()) s.by_role[k] = totals_from(v);
    return s;
}

void collect_scores(const ScoreNode& node, json& out, int depth) {
    if (node.score) {
        out[node.id] = {{"score", round_display(*node.score)}, {"score_raw", *node.score}};
    }
    if (depth == 0) return;
    for (const auto& child : node.children) collect_scores(child, out, depth - 1);
}

}  // namespace

std::vector<std::string> FactSheet::absent_fields() const {
    std::vector<std::string> out;
    const auto scan = [&](const char* name, const json& section) {
        if (!section.is_object()) {
            out.push_back(name);
            return;
        }
        for (const auto& [k, v] : section.items()) {
            if (v.is_null()) out.push_back(std::string(name) + "." + k);
        }
    };
    scan("pre_training", pre_training);
    scan("during_training", during_training);
    scan("post_training", post_training);
    return out;
}

double FactSheet::completeness() const {
    std::size_t total = 0;
    std::size_t populated = 0;
    for (const json* section : {&pre_training, &during_training, &post_training}) {
        if (!section->is_object()) continue;
        for (const auto& [k, v] : section->items()) {
            ++total;
            if (!v.is_null()) ++populated;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(populated) / static_cast<double>(total);
}

json FactSheet::to_json() const {
    return {{"pre_training", pre_training},
            {"during_training", during_training},
            {"post_training", post_training}};
}

FactSheet populate_factsheet(const FederationConfig& config, const SimulationResult* simulation,
                             const ScoreNode* scores, bool strict) {
    FactSheet fs;
    const json echo = to_json(config);
    fs.pre_training = json::object();
    for (const char* key :
         {"num_clients", "total_rounds", "sample_size", "selection_rate", "local_rounds",
          "dataset_size", "model_size", "client_locations", "client_hardware", "server_location",
          "server_hardware"}) {
        fs.pre_training[key] = echo.at(key);
    }

    fs.during_training = {{"selection_counts", nullptr},
                          {"class_distribution", nullptr},
                          {"emissions_by_phase", nullptr}};
    fs.post_training = {{"evaluation", nullptr},
                        {"external_statistics", config.external_statistics},
                        {"final_scores", nullptr}};

    if (simulation != nullptr) {
        fs.during_training["selection_counts"] = simulation->hashed_selection_counts;
        fs.during_training["class_distribution"] =
            simulation->state.class_distribution.empty()
                ? json(nullptr)
                : json(simulation->state.class_distribution);
        fs.during_training["emissions_by_phase"] =
            emissions_json(EmissionsSummary::from(simulation->state.emissions))["by_phase"];

        std::vector<double> participation;
        std::vector<double> training_time;
        std::int64_t selections = 0;
        for (const auto& s : simulation->statistics) {
            participation.push_back(s.participation_rate);
            training_time.push_back(s.avg_training_time);
            selections += s.selection_count;
        }
        fs.post_training["evaluation"] = {
            {"clients", simulation->statistics.size()},
            {"rounds_completed", simulation->state.round},
            {"total_selections", selections},
            {"participation_rate", summary_stats(participation)},
            {"avg_training_time_s", summary_stats(training_time)},
        };
    }
    if (scores != nullptr) {
        json final_scores = json::object();
        collect_scores(*scores, final_scores, 1);
        fs.post_training["final_scores"] = final_scores;
    }

    if (strict) {
        const auto absent = fs.absent_fields();
        if (!absent.empty()) {
            std::string list;
            for (const auto& f : absent) list += (list.empty() ? "" : ", ") + f;
            throw CompletenessError("factsheet incomplete: " + list);
        }
    }
    return fs;
}

// ---- trust report ----------------------------------------------------------

EmissionsSummary EmissionsSummary::from(const EmissionsLog& log) {
    EmissionsSummary s;
    s.total = log.total();
    for (const Phase p : {Phase::training, Phase::aggregation, Phase::communication}) {
        const auto t = log.total_for(p);
        if (t.records > 0) s.by_phase[std::string(to_string(p))] = t;
    }
    for (const Role r : {Role::client, Role::server}) {
        const auto t = log.total_for(r);
        if (t.records > 0) s.by_role[std::string(to_string(r))] = t;
    }
    return s;
}

bool EmissionsSummary::operator==(const EmissionsSummary&) const = default;
bool TrustReport::operator==(const TrustReport&) const = default;

namespace {

NodeKind node_kind_from(const std::string& s) {
    for (const NodeKind k : {NodeKind::metric, NodeKind::notion, NodeKind::pillar, NodeKind::root}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("report: unknown node kind '" + s + "'");
}

NormalizationRule::Kind rule_kind_from(const std::string& s) {
    using K = NormalizationRule::Kind;
    for (const K k : {K::linear_inverse, K::linear_direct, K::log_bucket, K::selection_rate,
                      K::identity}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("report: unknown rule '" + s + "'");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json node_json(const ScoreNode& node) {
    json j;
    j["id"] = node.id;
    j["kind"] = to_string(node.kind);
    j["weight"] = node.weight;
    j["partial"] = node.partial;
    j["score"] = node.score ? json(round_display(*node.score)) : json(nullptr);
    j["score_raw"] = optional_number(node.score);
    if (node.is_leaf()) {
        j["raw"] = optional_number(node.raw);
        json rule;
        rule["kind"] = to_string(node.rule->kind);
        rule["lo"] = node.rule->lo;
        rule["hi"] = node.rule->hi;
        json anchors = json::array();
        for (const auto& a : node.rule->anchors) anchors.push_back({a.raw, a.normalized});
        rule["anchors"] = anchors;
        j["rule"] = rule;
    } else {
        json children = json::array();
        for (const auto& c : node.children) children.push_back(node_json(c));
        j["children"] = children;
    }
    return j;
}

ScoreNode node_from(const json& j) {
    ScoreNode n;
    n.id = j.at("id").get<std::string>();
    n.kind = node_kind_from(j.at("kind").get<std::string>());
    n.weight = j.at("weight").get<double>();
    n.partial = j.at("partial").get<bool>();
    n.score = optional_from(j.at("score_raw"));
    if (n.kind == NodeKind::metric) {
        n.raw = optional_from(j.at("raw"));
        const json& r = j.at("rule");
        NormalizationRule rule;
        rule.kind = rule_kind_from(r.at("kind").get<std::string>());
        rule.lo = r.at("lo").get<double>();
        rule.hi = r.at("hi").get<double>();
        for (const auto& a : r.at("anchors")) {
            rule.anchors.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        }
        n.rule = std::move(rule);
    } else {
        for (const auto& c : j.at("children")) n.children.push_back(node_from(c));
    }
    return n;
}

}  // namespace

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string render_report(const TrustReport& report) {
    json weights = json::object();
    for (const auto& [id, w] : report.weights.weights) weights[id] = w;
    json doc;
    doc["tool"] = {{"name", kToolName}, {"version", report.tool_version}};
    doc["config_digest"] = report.config_digest;
    doc["partial"] = report.partial;
    doc["trust_score"] =
        report.scores.score ? json(round_display(*report.scores.score)) : json(nullptr);
    doc["trust_score_raw"] = optional_number(report.scores.score);
    doc["scores"] = node_json(report.scores);
    doc["weights"] = weights;
    doc["emissions"] = report.emissions ? emissions_json(*report.emissions) : json(nullptr);
    doc["factsheet"] = report.factsheet;
    return render_json(doc);
}

TrustReport parse_report(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
    }
    TrustReport r;
    try {
        r.tool_version = doc.at("tool").at("version").get<std::string>();
        r.config_digest = doc.at("config_digest").get<std::string>();
        r.partial = doc.at("partial").get<bool>();
        r.scores = node_from(doc.at("scores"));
        for (const auto& [id, w] : doc.at("weights").items()) r.weights.weights[id] = w.get<double>();
        if (!doc.at("emissions").is_null()) r.emissions = emissions_from(doc.at("emissions"));
        r.factsheet = doc.at("factsheet");
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
    }
    return r;
}

double recompute_root(const TrustReport& report) {
    ScoreNode copy = report.scores;
    return aggregate(copy, {.allow_partial = report.partial});
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const auto tmp = path.parent_path() /
                     ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << bytes;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

}  // namespace fedsust
