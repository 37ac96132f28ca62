#pragma once

// TDP-based energy and CO2eq estimation per federation phase.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fedsust/reference_data.hpp"

namespace fedsust {

struct EnergyModel {
    double cpu_utilization = 1.0;       // [0,1], applied during training and aggregation
    double comm_energy_per_byte = 0.0;  // kWh per byte transferred; 0 disables
    double idle_fraction = 0.0;         // [0,1], server draw while waiting on clients

    // Workload model. Training duration per client-round is
    //   training_seconds_per_unit * local_rounds * dataset_size * (model_size / 1e6)
    // and aggregation duration per round is
    //   aggregation_seconds_per_unit * updates * (model_size / 1e6).
    double training_seconds_per_unit = 1e-6;
    double aggregation_seconds_per_unit = 1e-4;
    double bytes_per_parameter = 4.0;

    void validate() const;
};

enum class Role { client, server };
enum class Phase { training, aggregation, communication };

std::string_view to_string(Role role);
std::string_view to_string(Phase phase);

struct EmissionRecord {
    std::string node_id;
    Role role = Role::client;
    Phase phase = Phase::training;
    std::int64_t round = 0;
    double duration_s = 0.0;
    double energy_kwh = 0.0;
    double intensity = 0.0;  // gCO2eq/kWh
    double co2eq_g = 0.0;
};

// tdp * utilization * duration / 3.6e6
double estimate_energy(double tdp_watts, double utilization, double duration_s);
double energy_to_co2(double energy_kwh, double intensity);

struct NodeRef {
    std::string id;
    Role role = Role::client;
    double intensity = 0.0;  // resolved grid intensity
};

// A record for `duration_s` of work at the model's utilization.
EmissionRecord track_phase(const NodeRef& node, Phase phase, std::int64_t round,
                           const EnergyModel& model, const HardwareProfile& hw,
                           double duration_s);

// Record for an already-known energy amount (communication, idle draw).
EmissionRecord record_energy(const NodeRef& node, Phase phase, std::int64_t round,
                             double duration_s, double energy_kwh);

struct EmissionTotals {
    double energy_kwh = 0.0;
    double co2eq_g = 0.0;
    std::size_t records = 0;

    bool operator==(const EmissionTotals&) const = default;
};

class EmissionsLog {
public:
    void append(EmissionRecord record);
    void merge(const EmissionsLog& other);

    // Orders by (round, role, node_id, phase); the persisted order.
    void sort_canonical();

    const std::vector<EmissionRecord>& records() const { return records_; }
    EmissionTotals total() const;
    EmissionTotals total_for(Phase phase) const;
    EmissionTotals total_for(Role role) const;

    // Header `round,role,node_id,phase,duration_s,energy_kwh,intensity_gco2_kwh,co2eq_g`,
    // floats at 6 significant digits. Sorts a copy first.
    void write_csv(std::ostream& out) const;
    std::string to_csv() const;

private:
    std::vector<EmissionRecord> records_;
};

}  // namespace fedsust
