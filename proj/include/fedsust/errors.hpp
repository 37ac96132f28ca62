#pragma once

#include <stdexcept>
#include <string>

namespace fedsust {

// Bad input: malformed config, out-of-domain value, inconsistent weights.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A leaf metric has no raw value at aggregation time.
class MissingMetricError : public ValidationError {
public:
    explicit MissingMetricError(const std::string& node_id)
        : ValidationError("missing metric: " + node_id), node_id_(node_id) {}
    const std::string& node_id() const noexcept { return node_id_; }

private:
    std::string node_id_;
};

// Lookup failure against the bundled reference datasets (grid, hardware,
// location). Distinct from ValidationError so the CLI can map it to its own
// exit code.
class ReferenceDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CompletenessError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace fedsust
