#pragma once

// Deterministic federation simulator: seeded client sampling, pseudo local
// training, FedAvg-style aggregation, statistics and emissions tracking.
// No real model is trained; the parameter vector only has to stay finite.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fedsust/emissions.hpp"
#include "fedsust/federation_config.hpp"
#include "fedsust/kernels.hpp"
#include "fedsust/reference_data.hpp"
#include "fedsust/rng.hpp"

namespace fedsust {

inline constexpr std::int64_t kModelVectorCap = 4096;

// Uniform m-subset of [0, N) without replacement, returned in ascending
// order. Partial Fisher-Yates: for k = 0..m-1, swap position k with
// k + rng.below(N - k); the first m positions are the sample.
std::vector<std::int64_t> sample_clients(std::int64_t num_clients, std::int64_t sample_size,
                                         SplitMix64& rng);

// The sampling stream for one round.
SplitMix64 round_sampler(std::uint64_t seed, std::int64_t round);

// Hashed label -> sample count, summed across clients.
using ClassDistribution = std::map<std::string, std::int64_t>;

// Adds one client's (already hashed) label counts into `distribution`.
void accumulate_class_distribution(ClassDistribution& distribution,
                                   const ClassDistribution& client_labels);

kernels::Vector aggregate_model(std::span<const kernels::Vector> updates);

struct ClientStatistics {
    std::string hashed_id;
    std::int64_t selection_count = 0;
    double participation_rate = 0.0;  // selection_count / T
    double avg_training_time = 0.0;   // seconds per participated round
    std::int64_t dataset_size = 0;
    ClassDistribution class_balance;
};

struct FederationState {
    std::int64_t round = 0;  // rounds completed
    kernels::Vector model;
    std::vector<std::int64_t> selection_counts;  // by client index
    ClassDistribution class_distribution;
    EmissionsLog emissions;
    std::vector<std::vector<std::int64_t>> selection_history;  // only when recorded
};

struct SimulationResult {
    FederationState state;
    std::vector<ClientStatistics> statistics;  // by client index
    std::map<std::string, std::int64_t> hashed_selection_counts;
};

enum class Execution { serial, parallel };

struct SimulationOptions {
    Execution execution = Execution::parallel;
    int threads = 0;  // 0: OpenMP default
    bool record_selection_history = false;
};

// Salted, per-run identifiers. The salt is derived from the seed and never
// written out.
std::string hashed_client_id(std::uint64_t seed, std::int64_t client);
std::string hashed_label(std::uint64_t seed, std::int64_t label);

// Synthetic per-client label counts (non-IID, deterministic in seed and
// client); counts sum to `dataset_size`.
ClassDistribution client_label_counts(std::uint64_t seed, std::int64_t client,
                                      std::int64_t dataset_size, int num_classes);

// Duration of one client's local training in one round, in seconds.
double training_duration(const FederationConfig& config, std::int64_t client);
double aggregation_duration(const FederationConfig& config, std::int64_t updates);

SimulationResult simulate_federation(const FederationConfig& config, const ReferenceData& ref,
                                     const SimulationOptions& options = {});

}  // namespace fedsust
