#pragma once

// Scenario description shared by static scoring and the federation
// simulator. Parsed from a JSON scenario file whose keys mirror the field
// names below; see README.md for the schema.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedsust/emissions.hpp"

namespace fedsust {

// A fraction of the client population sharing one value (a processor
// model, or a location).
struct ShareEntry {
    double share = 0.0;
    std::string value;
};

// Either (share, value) groups or an explicit per-client list; in the
// per-client form each entry carries share 1/N and client i maps to entry i.
struct ClientAssignment {
    std::vector<ShareEntry> entries;
    bool per_client = false;

    // Index into `entries` for every client 0..n-1.
    std::vector<std::size_t> assign(std::int64_t num_clients) const;
};

struct FederationConfig {
    std::int64_t num_clients = 0;   // N
    std::int64_t sample_size = 0;   // m, clients selected per round
    std::int64_t total_rounds = 0;  // T
    double selection_rate = 0.0;    // nominal m / N, the scored value

    // One value for all clients, or one per client.
    std::vector<double> local_rounds;
    std::optional<std::vector<double>> dataset_sizes;
    std::optional<double> model_size;

    ClientAssignment client_hardware;
    ClientAssignment client_locations;
    std::string server_hardware;
    std::string server_location;

    std::uint64_t seed = 0;
    int num_classes = 10;
    EnergyModel energy;

    // Statistics supplied from outside (e.g. clever score, feature
    // importance); echoed into the FactSheet, never computed here.
    nlohmann::json external_statistics = nlohmann::json::object();

    double local_rounds_for(std::int64_t client) const;
    std::optional<double> dataset_size_for(std::int64_t client) const;
};

// Shared validator for every command. Throws ValidationError naming the
// offending field.
FederationConfig parse_federation_config(const nlohmann::json& doc);
FederationConfig load_federation_config(const std::filesystem::path& path);
void validate_config(const FederationConfig& config);

// Canonical echo of the configuration (sorted keys).
nlohmann::json to_json(const FederationConfig& config);

// FNV-1a 64 of the canonical echo, as 16 lower-case hex digits.
std::string config_digest(const FederationConfig& config);

}  // namespace fedsust
