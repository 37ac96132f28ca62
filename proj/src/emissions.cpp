#include "fedsust/emissions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "fedsust/errors.hpp"

namespace fedsust {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void EnergyModel::validate() const {
    if (!in_unit(cpu_utilization)) {
        throw ValidationError("energy_model.cpu_utilization must lie in [0,1]");
    }
    if (!in_unit(idle_fraction)) {
        throw ValidationError("energy_model.idle_fraction must lie in [0,1]");
    }
    if (!(comm_energy_per_byte >= 0.0) || !std::isfinite(comm_energy_per_byte)) {
        throw ValidationError("energy_model.comm_energy_per_byte must be >= 0");
    }
    if (!(training_seconds_per_unit >= 0.0) || !std::isfinite(training_seconds_per_unit)) {
        throw ValidationError("energy_model.training_seconds_per_unit must be >= 0");
    }
    if (!(aggregation_seconds_per_unit >= 0.0) || !std::isfinite(aggregation_seconds_per_unit)) {
        throw ValidationError("energy_model.aggregation_seconds_per_unit must be >= 0");
    }
    if (!(bytes_per_parameter > 0.0) || !std::isfinite(bytes_per_parameter)) {
        throw ValidationError("energy_model.bytes_per_parameter must be > 0");
    }
}

std::string_view to_string(Role role) { return role == Role::server ? "server" : "client"; }

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::training: return "training";
        case Phase::aggregation: return "aggregation";
        case Phase::communication: return "communication";
    }
    return "unknown";
}

double estimate_energy(double tdp_watts, double utilization, double duration_s) {
    if (!(tdp_watts > 0.0) || !std::isfinite(tdp_watts)) {
        throw ValidationError("estimate_energy: tdp must be positive");
    }
    if (!in_unit(utilization)) {
        throw ValidationError("estimate_energy: utilization must lie in [0,1]");
    }
    if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
        throw ValidationError("estimate_energy: duration must be >= 0");
    }
    return tdp_watts * utilization * duration_s / 3.6e6;
}

double energy_to_co2(double energy_kwh, double intensity) {
    if (!(energy_kwh >= 0.0) || !(intensity >= 0.0) || !std::isfinite(energy_kwh) ||
        !std::isfinite(intensity)) {
        throw ValidationError("energy_to_co2: inputs must be non-negative");
    }
    return energy_kwh * intensity;
}

EmissionRecord record_energy(const NodeRef& node, Phase phase, std::int64_t round,
                             double duration_s, double energy_kwh) {
    EmissionRecord r;
    r.node_id = node.id;
    r.role = node.role;
    r.phase = phase;
    r.round = round;
    r.duration_s = duration_s;
    r.energy_kwh = energy_kwh;
    r.intensity = node.intensity;
    r.co2eq_g = energy_to_co2(energy_kwh, node.intensity);
    return r;
}

EmissionRecord track_phase(const NodeRef& node, Phase phase, std::int64_t round,
                           const EnergyModel& model, const HardwareProfile& hw,
                           double duration_s) {
    const double energy = estimate_energy(hw.tdp, model.cpu_utilization, duration_s);
    return record_energy(node, phase, round, duration_s, energy);
}

void EmissionsLog::append(EmissionRecord record) { records_.push_back(std::move(record)); }

void EmissionsLog::merge(const EmissionsLog& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

void EmissionsLog::sort_canonical() {
    std::sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.round, a.role, a.node_id, a.phase) <
               std::tie(b.round, b.role, b.node_id, b.phase);
    });
}

EmissionTotals EmissionsLog::total() const {
    EmissionTotals t;
    for (const auto& r : records_) {
        t.energy_kwh += r.energy_kwh;
        t.co2eq_g += r.co2eq_g;
        ++t.records;
    }
    return t;
}

EmissionTotals EmissionsLog::total_for(Phase phase) const {
    EmissionTotals t;
    for (const auto& r : records_) {
        if (r.phase != phase) continue;
        t.energy_kwh += r.energy_kwh;
        t.co2eq_g += r.co2eq_g;
        ++t.records;
    }
    return t;
}

EmissionTotals EmissionsLog::total_for(Role role) const {
    EmissionTotals t;
    for (const auto& r : records_) {
        if (r.role != role) continue;
        t.energy_kwh += r.energy_kwh;
        t.co2eq_g += r.co2eq_g;
        ++t.records;
    }
    return t;
}

void EmissionsLog::write_csv(std::ostream& out) const {
    EmissionsLog sorted = *this;
    sorted.sort_canonical();
    out << "round,role,node_id,phase,duration_s,energy_kwh,intensity_gco2_kwh,co2eq_g\n";
    for (const auto& r : sorted.records_) {
        out << r.round << ',' << to_string(r.role) << ',' << r.node_id << ','
            << to_string(r.phase) << ',' << g6(r.duration_s) << ',' << g6(r.energy_kwh) << ','
            << g6(r.intensity) << ',' << g6(r.co2eq_g) << '\n';
    }
}

std::string EmissionsLog::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

}  // namespace fedsust
