#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "fedsust/score_engine.hpp"

namespace fedsust {

// Node id (dot-path) -> weight override.
struct WeightConfig {
    std::map<std::string, double> weights;

    bool empty() const { return weights.empty(); }
    bool operator==(const WeightConfig&) const = default;
};

// Accepts a flat object of dot-paths ({"sustainability.carbon_intensity": 0.5})
// or nested objects whose keys are joined with '.'. Inside a nested object
// the key "_weight" sets the weight of the enclosing node.
WeightConfig parse_weight_config(const nlohmann::json& doc);
WeightConfig load_weight_config(const std::filesystem::path& path);

// Overrides node weights in place and re-validates the tree. Unknown ids are
// rejected so a typo never silently leaves a default in place.
void apply_weights(ScoreNode& root, const WeightConfig& config);

// Every non-root node's effective weight, keyed by id.
WeightConfig collect_weights(const ScoreNode& root);

}  // namespace fedsust
