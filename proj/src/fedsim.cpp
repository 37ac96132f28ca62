#include "fedsust/fedsim.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <unordered_map>

#include <omp.h>

#include "fedsust/errors.hpp"

namespace fedsust {

namespace {

constexpr const char* kServerId = "server";

std::uint64_t salt_for(std::uint64_t seed) {
    return derive_key(seed, {static_cast<std::uint64_t>(Stream::salt)});
}

double model_factor(const FederationConfig& config) {
    return config.model_size.value_or(1.0) / 1e6;
}

std::int64_t model_vector_length(const FederationConfig& config) {
    const double declared = config.model_size.value_or(1.0);
    return declared >= static_cast<double>(kModelVectorCap)
               ? kModelVectorCap
               : std::max<std::int64_t>(1, static_cast<std::int64_t>(declared));
}

struct ClientSetup {
    std::string id;
    NodeRef node;
    const HardwareProfile* hardware = nullptr;
    double duration = 0.0;
};

}  // namespace

SplitMix64 round_sampler(std::uint64_t seed, std::int64_t round) {
    return SplitMix64(derive_key(
        seed, {static_cast<std::uint64_t>(Stream::sampling), static_cast<std::uint64_t>(round)}));
}

std::vector<std::int64_t> sample_clients(std::int64_t num_clients, std::int64_t sample_size,
                                         SplitMix64& rng) {
    if (num_clients < 1) throw ValidationError("sample_clients: N must be >= 1");
    if (sample_size < 1 || sample_size > num_clients) {
        throw ValidationError("sample_clients: m must satisfy 1 <= m <= N");
    }
    // Sparse view of the identity permutation; only swapped slots are stored.
    std::unordered_map<std::int64_t, std::int64_t> swapped;
    const auto at = [&](std::int64_t i) {
        const auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(sample_size));
    for (std::int64_t k = 0; k < sample_size; ++k) {
        const auto j = k + static_cast<std::int64_t>(
                               rng.below(static_cast<std::uint64_t>(num_clients - k)));
        const std::int64_t vk = at(k);
        const std::int64_t vj = at(j);
        swapped[k] = vj;
        swapped[j] = vk;
        out.push_back(vj);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void accumulate_class_distribution(ClassDistribution& distribution,
                                   const ClassDistribution& client_labels) {
    for (const auto& [label, count] : client_labels) distribution[label] += count;
}

kernels::Vector aggregate_model(std::span<const kernels::Vector> updates) {
    return kernels::aggregate_model(updates);
}

std::string hashed_client_id(std::uint64_t seed, std::int64_t client) {
    // FNV alone barely avalanches on short inputs; finish with mix64.
    return to_hex(mix64(fnv1a64("client-" + std::to_string(client), salt_for(seed))));
}

std::string hashed_label(std::uint64_t seed, std::int64_t label) {
    return to_hex(mix64(fnv1a64("label-" + std::to_string(label), salt_for(seed))));
}

ClassDistribution client_label_counts(std::uint64_t seed, std::int64_t client,
                                      std::int64_t dataset_size, int num_classes) {
    SplitMix64 rng(derive_key(seed, {static_cast<std::uint64_t>(Stream::labels),
                                     static_cast<std::uint64_t>(client)}));
    std::vector<double> weights(static_cast<std::size_t>(num_classes));
    double total = 0.0;
    for (auto& w : weights) {
        const double u = rng.uniform();
        w = u * u + 0.01;  // skewed, but every class possible
        total += w;
    }
    std::vector<std::int64_t> counts(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        counts[k] = static_cast<std::int64_t>(
            std::floor(static_cast<double>(dataset_size) * weights[k] / total));
        assigned += counts[k];
    }
    for (std::size_t k = 0; assigned < dataset_size; k = (k + 1) % counts.size()) {
        ++counts[k];
        ++assigned;
    }
    ClassDistribution out;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) continue;
        const auto [it, inserted] =
            out.emplace(hashed_label(seed, static_cast<std::int64_t>(k)), counts[k]);
        if (!inserted) {
            std::clog << "fedsust: label hash collision on " << it->first << '\n';
            it->second += counts[k];
        }
    }
    return out;
}

double training_duration(const FederationConfig& config, std::int64_t client) {
    return config.energy.training_seconds_per_unit * config.local_rounds_for(client) *
           config.dataset_size_for(client).value_or(1.0) * model_factor(config);
}

double aggregation_duration(const FederationConfig& config, std::int64_t updates) {
    return config.energy.aggregation_seconds_per_unit * static_cast<double>(updates) *
           model_factor(config);
}

SimulationResult simulate_federation(const FederationConfig& config, const ReferenceData& ref,
                                     const SimulationOptions& options) {
    validate_config(config);
    const std::int64_t n = config.num_clients;
    const std::uint64_t seed = config.seed;

    // Resolve every node before any work so resolution errors abort cleanly.
    const auto hw_groups = config.client_hardware.assign(n);
    const auto loc_groups = config.client_locations.assign(n);
    std::vector<const HardwareProfile*> group_hw;
    for (const auto& e : config.client_hardware.entries) {
        group_hw.push_back(&ref.hardware.lookup(e.value));
    }
    std::vector<double> group_intensity;
    for (const auto& e : config.client_locations.entries) {
        group_intensity.push_back(ref.intensity_for(e.value));
    }
    const HardwareProfile& server_hw = ref.hardware.lookup(config.server_hardware);
    const NodeRef server{kServerId, Role::server, ref.intensity_for(config.server_location)};

    std::vector<ClientSetup> clients(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        auto& c = clients[static_cast<std::size_t>(i)];
        c.id = hashed_client_id(seed, i);
        c.node = {c.id, Role::client, group_intensity[loc_groups[static_cast<std::size_t>(i)]]};
        c.hardware = group_hw[hw_groups[static_cast<std::size_t>(i)]];
        c.duration = training_duration(config, i);
    }

    SimulationResult result;
    FederationState& state = result.state;
    state.selection_counts.assign(static_cast<std::size_t>(n), 0);

    // Class distribution is gathered from every client before training.
    result.statistics.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        auto& s = result.statistics[static_cast<std::size_t>(i)];
        s.hashed_id = clients[static_cast<std::size_t>(i)].id;
        if (const auto d = config.dataset_size_for(i)) {
            s.dataset_size = std::llround(*d);
            s.class_balance = client_label_counts(seed, i, s.dataset_size, config.num_classes);
            accumulate_class_distribution(state.class_distribution, s.class_balance);
        }
    }

    const std::int64_t dim = model_vector_length(config);
    state.model.resize(static_cast<std::size_t>(dim));
    {
        SplitMix64 init(derive_key(seed, {static_cast<std::uint64_t>(Stream::initial_model)}));
        for (auto& w : state.model) w = init.uniform() - 0.5;
    }

    const bool parallel = options.execution == Execution::parallel;
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
    const double comm_bytes =
        2.0 * config.model_size.value_or(1.0) * config.energy.bytes_per_parameter;
    const bool track_comm = config.energy.comm_energy_per_byte > 0.0;
    std::vector<double> training_time(static_cast<std::size_t>(n), 0.0);

    for (std::int64_t t = 0; t < config.total_rounds; ++t) {
        SplitMix64 rng = round_sampler(seed, t);
        const auto selected = sample_clients(n, config.sample_size, rng);
        if (options.record_selection_history) state.selection_history.push_back(selected);
        for (const auto i : selected) ++state.selection_counts[static_cast<std::size_t>(i)];

        const auto k = static_cast<std::int64_t>(selected.size());
        std::vector<kernels::Vector> updates(selected.size(), kernels::Vector(state.model.size()));
        std::vector<EmissionRecord> training(selected.size());
        std::vector<EmissionRecord> comm(track_comm ? selected.size() : 0);

        const auto client_phase = [&](std::int64_t slot) {
            const auto s = static_cast<std::size_t>(slot);
            const std::int64_t i = selected[s];
            const ClientSetup& c = clients[static_cast<std::size_t>(i)];
            const std::uint64_t key =
                derive_key(seed, {static_cast<std::uint64_t>(Stream::local_update),
                                  static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)});
            if (parallel) {
                kernels::local_update(state.model, key, updates[s]);
            } else {
                kernels::local_update_serial(state.model, key, updates[s]);
            }
            training[s] = track_phase(c.node, Phase::training, t, config.energy, *c.hardware,
                                      c.duration);
            if (track_comm) {
                comm[s] = record_energy(c.node, Phase::communication, t, 0.0,
                                        comm_bytes * config.energy.comm_energy_per_byte);
            }
        };

        if (parallel) {
#pragma omp parallel for schedule(static) num_threads(threads)
            for (std::int64_t slot = 0; slot < k; ++slot) client_phase(slot);
        } else {
            for (std::int64_t slot = 0; slot < k; ++slot) client_phase(slot);
        }

        // Round barrier: aggregation only after every selected client reported.
        double longest = 0.0;
        for (std::size_t s = 0; s < selected.size(); ++s) {
            training_time[static_cast<std::size_t>(selected[s])] += training[s].duration_s;
            longest = std::max(longest, training[s].duration_s);
            state.emissions.append(std::move(training[s]));
            if (track_comm) state.emissions.append(std::move(comm[s]));
        }

        state.model = parallel ? kernels::aggregate_model(updates)
                               : kernels::aggregate_model_serial(updates);

        const double agg_time = aggregation_duration(config, k);
        EmissionRecord agg = track_phase(server, Phase::aggregation, t, config.energy, server_hw,
                                         agg_time);
        if (config.energy.idle_fraction > 0.0) {
            agg.duration_s += longest;
            agg.energy_kwh += estimate_energy(server_hw.tdp, config.energy.idle_fraction, longest);
            agg.co2eq_g = energy_to_co2(agg.energy_kwh, agg.intensity);
        }
        state.emissions.append(std::move(agg));
        state.round = t + 1;
    }
    state.emissions.sort_canonical();

    const double rounds = static_cast<double>(config.total_rounds);
    for (std::int64_t i = 0; i < n; ++i) {
        auto& s = result.statistics[static_cast<std::size_t>(i)];
        s.selection_count = state.selection_counts[static_cast<std::size_t>(i)];
        s.participation_rate = static_cast<double>(s.selection_count) / rounds;
        s.avg_training_time = s.selection_count > 0
                                  ? training_time[static_cast<std::size_t>(i)] /
                                        static_cast<double>(s.selection_count)
                                  : 0.0;
        result.hashed_selection_counts[s.hashed_id] = s.selection_count;
    }
    return result;
}

}  // namespace fedsust
