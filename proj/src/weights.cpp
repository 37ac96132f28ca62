#include "fedsust/weights.hpp"

#include <cmath>
#include <fstream>

#include "fedsust/errors.hpp"

namespace fedsust {

namespace {

void flatten(const nlohmann::json& node, const std::string& prefix, WeightConfig& out) {
    for (const auto& [key, value] : node.items()) {
        if (key == "_weight") {
            if (prefix.empty()) {
                throw ValidationError("weights: '_weight' is not allowed at the top level");
            }
            if (!value.is_number()) {
                throw ValidationError("weights: '" + prefix + "._weight' must be a number");
            }
            out.weights[prefix] = value.get<double>();
            continue;
        }
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, path, out);
        } else if (value.is_number()) {
            out.weights[path] = value.get<double>();
        } else {
            throw ValidationError("weights: '" + path + "' must be a number or object");
        }
    }
}

void collect(const ScoreNode& node, bool is_root, WeightConfig& out) {
    if (!is_root) out.weights[node.id] = node.weight;
    for (const auto& child : node.children) collect(child, false, out);
}

}  // namespace

WeightConfig parse_weight_config(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("weights: top-level value must be an object");
    }
    WeightConfig cfg;
    flatten(doc, "", cfg);
    for (const auto& [id, w] : cfg.weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("weights: '" + id + "' must be a non-negative number");
        }
    }
    return cfg;
}

WeightConfig load_weight_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("weights: cannot open " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("weights: " + path.string() + ": " + e.what());
    }
    return parse_weight_config(doc);
}

void apply_weights(ScoreNode& root, const WeightConfig& config) {
    for (const auto& [id, w] : config.weights) {
        ScoreNode* node = root.find(id);
        if (node == nullptr || node == &root) {
            throw ValidationError("weights: unknown node id '" + id + "'");
        }
        node->weight = w;
    }
    validate_tree(root);
}

WeightConfig collect_weights(const ScoreNode& root) {
    WeightConfig out;
    collect(root, true, out);
    return out;
}

}  // namespace fedsust
