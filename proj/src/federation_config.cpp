#include "fedsust/federation_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "fedsust/errors.hpp"
#include "fedsust/rng.hpp"

namespace fedsust {

namespace {

constexpr double kShareTolerance = 1e-9;

const std::set<std::string> kKnownKeys = {
    "num_clients",      "sample_size",     "total_rounds",  "selection_rate",
    "local_rounds",     "dataset_size",    "model_size",    "client_hardware",
    "client_locations", "server_hardware", "server_location", "seed",
    "num_classes",      "energy_model",    "external_statistics",
};

const std::set<std::string> kEnergyKeys = {
    "cpu_utilization",           "comm_energy_per_byte",          "idle_fraction",
    "training_seconds_per_unit", "aggregation_seconds_per_unit",  "bytes_per_parameter",
};

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ValidationError("config field '" + field + "': " + why);
}

double number(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(field, "must be finite");
    return d;
}

std::int64_t integer(const nlohmann::json& v, const std::string& field) {
    const double d = number(v, field);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) fail(field, "expected an integer");
    return static_cast<std::int64_t>(d);
}

std::string text(const nlohmann::json& v, const std::string& field) {
    if (!v.is_string()) fail(field, "expected a string");
    std::string s = v.get<std::string>();
    if (s.empty()) fail(field, "must not be empty");
    return s;
}

// A scalar, or an array of per-client values.
std::vector<double> scalar_or_list(const nlohmann::json& v, const std::string& field) {
    if (v.is_array()) {
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
        }
        if (out.empty()) fail(field, "must not be empty");
        return out;
    }
    return {number(v, field)};
}

ClientAssignment assignment(const nlohmann::json& v, const std::string& field,
                            const char* value_key) {
    if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array");
    ClientAssignment a;
    if (v.front().is_string()) {
        a.per_client = true;
        const double share = 1.0 / static_cast<double>(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            a.entries.push_back({share, text(v[i], field + "[" + std::to_string(i) + "]")});
        }
        return a;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = field + "[" + std::to_string(i) + "]";
        const auto& e = v[i];
        if (!e.is_object()) fail(at, "expected {\"share\", \"" + std::string(value_key) + "\"}");
        if (!e.contains("share")) fail(at + ".share", "required");
        if (!e.contains(value_key)) fail(at + "." + value_key, "required");
        for (const auto& [k, _] : e.items()) {
            if (k != "share" && k != value_key) fail(at + "." + k, "unknown key");
        }
        a.entries.push_back({number(e["share"], at + ".share"), text(e[value_key], at + "." + value_key)});
    }
    return a;
}

nlohmann::json assignment_json(const ClientAssignment& a, const char* value_key) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : a.entries) {
        if (a.per_client) {
            out.push_back(e.value);
        } else {
            out.push_back({{"share", e.share}, {value_key, e.value}});
        }
    }
    return out;
}

nlohmann::json scalar_or_list_json(const std::vector<double>& v) {
    if (v.size() == 1) return v.front();
    return v;
}

void check_assignment(const ClientAssignment& a, std::int64_t n, const std::string& field) {
    if (a.per_client) {
        if (static_cast<std::int64_t>(a.entries.size()) != n) {
            fail(field, "per-client list has " + std::to_string(a.entries.size()) +
                            " entries for " + std::to_string(n) + " clients");
        }
        return;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const double s = a.entries[i].share;
        if (!(s > 0.0 && s <= 1.0)) {
            fail(field + "[" + std::to_string(i) + "].share", "must lie in (0,1]");
        }
        sum += s;
    }
    if (std::abs(sum - 1.0) > kShareTolerance) fail(field, "shares must sum to 1");
}

void check_per_client(const std::vector<double>& v, std::int64_t n, const std::string& field) {
    if (v.size() != 1 && static_cast<std::int64_t>(v.size()) != n) {
        fail(field, "expected one value or one per client (" + std::to_string(n) + ")");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 1.0)) fail(field, "values must be >= 1");
    }
}

}  // namespace

std::vector<std::size_t> ClientAssignment::assign(std::int64_t num_clients) const {
    std::vector<std::size_t> out(static_cast<std::size_t>(num_clients));
    if (per_client) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
        return out;
    }
    // Client i belongs to the first group whose rounded cumulative boundary
    // exceeds i; the last group always ends at N.
    std::vector<std::int64_t> boundaries(entries.size());
    double cumulative = 0.0;
    for (std::size_t g = 0; g < entries.size(); ++g) {
        cumulative += entries[g].share;
        boundaries[g] = g + 1 == entries.size()
                            ? num_clients
                            : std::llround(cumulative * static_cast<double>(num_clients));
    }
    std::size_t group = 0;
    for (std::int64_t i = 0; i < num_clients; ++i) {
        while (i >= boundaries[group]) ++group;
        out[static_cast<std::size_t>(i)] = group;
    }
    return out;
}

double FederationConfig::local_rounds_for(std::int64_t client) const {
    return local_rounds.size() == 1 ? local_rounds.front()
                                    : local_rounds[static_cast<std::size_t>(client)];
}

std::optional<double> FederationConfig::dataset_size_for(std::int64_t client) const {
    if (!dataset_sizes) return std::nullopt;
    return dataset_sizes->size() == 1 ? dataset_sizes->front()
                                      : (*dataset_sizes)[static_cast<std::size_t>(client)];
}

FederationConfig parse_federation_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("config: top-level value must be an object");
    for (const auto& [key, _] : doc.items()) {
        if (!kKnownKeys.contains(key)) fail(key, "unknown key");
    }
    const auto required = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) fail(key, "required");
        return doc[key];
    };

    FederationConfig c;
    c.num_clients = integer(required("num_clients"), "num_clients");
    c.total_rounds = integer(required("total_rounds"), "total_rounds");
    if (c.num_clients < 1) fail("num_clients", "must be >= 1");
    if (c.total_rounds < 1) fail("total_rounds", "must be >= 1");

    const bool has_m = doc.contains("sample_size");
    const bool has_rate = doc.contains("selection_rate");
    if (!has_m && !has_rate) fail("selection_rate", "selection_rate or sample_size is required");
    if (has_rate) {
        c.selection_rate = number(doc["selection_rate"], "selection_rate");
        if (!(c.selection_rate > 0.0 && c.selection_rate <= 1.0)) {
            fail("selection_rate", "must lie in (0,1]");
        }
    }
    if (has_m) {
        c.sample_size = integer(doc["sample_size"], "sample_size");
        if (c.sample_size < 1 || c.sample_size > c.num_clients) {
            fail("sample_size", "must satisfy 1 <= sample_size <= num_clients");
        }
        const double ratio =
            static_cast<double>(c.sample_size) / static_cast<double>(c.num_clients);
        if (!has_rate) {
            c.selection_rate = ratio;
        } else if (std::abs(c.selection_rate - ratio) > 1e-9) {
            fail("sample_size", "sample_size / num_clients disagrees with selection_rate");
        }
    } else {
        const auto m = std::llround(c.selection_rate * static_cast<double>(c.num_clients));
        c.sample_size = std::clamp<std::int64_t>(m, 1, c.num_clients);
    }

    c.local_rounds = scalar_or_list(required("local_rounds"), "local_rounds");
    if (doc.contains("dataset_size")) {
        c.dataset_sizes = scalar_or_list(doc["dataset_size"], "dataset_size");
    }
    if (doc.contains("model_size")) {
        c.model_size = number(doc["model_size"], "model_size");
    }

    c.client_hardware = assignment(required("client_hardware"), "client_hardware", "model");
    c.client_locations =
        assignment(required("client_locations"), "client_locations", "location");
    c.server_hardware = text(required("server_hardware"), "server_hardware");
    c.server_location = text(required("server_location"), "server_location");

    if (doc.contains("seed")) {
        const auto& s = doc["seed"];
        if (s.is_number_unsigned()) {
            c.seed = s.get<std::uint64_t>();
        } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
            c.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
        } else {
            fail("seed", "expected a non-negative integer");
        }
    }
    if (doc.contains("num_classes")) {
        const auto k = integer(doc["num_classes"], "num_classes");
        if (k < 1 || k > 100000) fail("num_classes", "must lie in [1, 100000]");
        c.num_classes = static_cast<int>(k);
    }
    if (doc.contains("energy_model")) {
        const auto& e = doc["energy_model"];
        if (!e.is_object()) fail("energy_model", "expected an object");
        for (const auto& [key, _] : e.items()) {
            if (!kEnergyKeys.contains(key)) fail("energy_model." + key, "unknown key");
        }
        const auto opt = [&](const char* key, double& dst) {
            if (e.contains(key)) dst = number(e[key], std::string("energy_model.") + key);
        };
        opt("cpu_utilization", c.energy.cpu_utilization);
        opt("comm_energy_per_byte", c.energy.comm_energy_per_byte);
        opt("idle_fraction", c.energy.idle_fraction);
        opt("training_seconds_per_unit", c.energy.training_seconds_per_unit);
        opt("aggregation_seconds_per_unit", c.energy.aggregation_seconds_per_unit);
        opt("bytes_per_parameter", c.energy.bytes_per_parameter);
    }
    if (doc.contains("external_statistics")) {
        if (!doc["external_statistics"].is_object()) {
            fail("external_statistics", "expected an object");
        }
        c.external_statistics = doc["external_statistics"];
    }

    validate_config(c);
    return c;
}

FederationConfig load_federation_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config: " + path.string() + ": " + e.what());
    }
    return parse_federation_config(doc);
}

void validate_config(const FederationConfig& c) {
    if (c.num_clients < 1) fail("num_clients", "must be >= 1");
    if (c.total_rounds < 1) fail("total_rounds", "must be >= 1");
    if (c.sample_size < 1 || c.sample_size > c.num_clients) {
        fail("sample_size", "must satisfy 1 <= sample_size <= num_clients");
    }
    if (!(c.selection_rate > 0.0 && c.selection_rate <= 1.0)) {
        fail("selection_rate", "must lie in (0,1]");
    }
    check_per_client(c.local_rounds, c.num_clients, "local_rounds");
    if (c.dataset_sizes) check_per_client(*c.dataset_sizes, c.num_clients, "dataset_size");
    if (c.model_size && !(*c.model_size >= 1.0)) fail("model_size", "must be >= 1");
    check_assignment(c.client_hardware, c.num_clients, "client_hardware");
    check_assignment(c.client_locations, c.num_clients, "client_locations");
    if (c.server_hardware.empty()) fail("server_hardware", "required");
    if (c.server_location.empty()) fail("server_location", "required");
    if (c.num_classes < 1) fail("num_classes", "must be >= 1");
    try {
        c.energy.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("config field ") + e.what());
    }
}

nlohmann::json to_json(const FederationConfig& c) {
    nlohmann::json j;
    j["num_clients"] = c.num_clients;
    j["sample_size"] = c.sample_size;
    j["total_rounds"] = c.total_rounds;
    j["selection_rate"] = c.selection_rate;
    j["local_rounds"] = scalar_or_list_json(c.local_rounds);
    j["dataset_size"] = c.dataset_sizes ? scalar_or_list_json(*c.dataset_sizes) : nlohmann::json();
    j["model_size"] = c.model_size ? nlohmann::json(*c.model_size) : nlohmann::json();
    j["client_hardware"] = assignment_json(c.client_hardware, "model");
    j["client_locations"] = assignment_json(c.client_locations, "location");
    j["server_hardware"] = c.server_hardware;
    j["server_location"] = c.server_location;
    j["seed"] = c.seed;
    j["num_classes"] = c.num_classes;
    j["energy_model"] = {
        {"cpu_utilization", c.energy.cpu_utilization},
        {"comm_energy_per_byte", c.energy.comm_energy_per_byte},
        {"idle_fraction", c.energy.idle_fraction},
        {"training_seconds_per_unit", c.energy.training_seconds_per_unit},
        {"aggregation_seconds_per_unit", c.energy.aggregation_seconds_per_unit},
        {"bytes_per_parameter", c.energy.bytes_per_parameter},
    };
    j["external_statistics"] = c.external_statistics;
    return j;
}

std::string config_digest(const FederationConfig& config) {
    return to_hex(fnv1a64(to_json(config).dump()));
}

}  // namespace fedsust
