#pragma once

// The ten sustainability metrics, derived from a FederationConfig plus the
// reference datasets, and the default scoring tree that consumes them.

#include <cstdint>
#include <optional>
#include <string>

#include "fedsust/federation_config.hpp"
#include "fedsust/reference_data.hpp"
#include "fedsust/score_engine.hpp"

namespace fedsust {

namespace ids {
inline constexpr const char* kTrust = "trust";
inline constexpr const char* kSustainability = "sustainability";
inline constexpr const char* kCarbon = "sustainability.carbon_intensity";
inline constexpr const char* kCarbonClient = "sustainability.carbon_intensity.client";
inline constexpr const char* kCarbonServer = "sustainability.carbon_intensity.server";
inline constexpr const char* kHardware = "sustainability.hardware_efficiency";
inline constexpr const char* kHardwareClient = "sustainability.hardware_efficiency.client";
inline constexpr const char* kHardwareServer = "sustainability.hardware_efficiency.server";
inline constexpr const char* kComplexity = "sustainability.federation_complexity";
inline constexpr const char* kGlobalRounds = "sustainability.federation_complexity.global_rounds";
inline constexpr const char* kNumClients = "sustainability.federation_complexity.num_clients";
inline constexpr const char* kSelectionRate = "sustainability.federation_complexity.selection_rate";
inline constexpr const char* kLocalRounds = "sustainability.federation_complexity.local_rounds";
inline constexpr const char* kDatasetSize = "sustainability.federation_complexity.dataset_size";
inline constexpr const char* kModelSize = "sustainability.federation_complexity.model_size";
}  // namespace ids

struct CarbonIntensityAssessment {
    double client_avg = 0.0;  // gCO2eq/kWh, population-weighted
    double server = 0.0;
    double total = 0.0;  // server + client_avg
};

struct HardwareAssessment {
    double client_avg_pp = 0.0;  // marks per watt, share-weighted
    double server_pp = 0.0;
    double total = 0.0;  // server_pp + client_avg_pp
};

struct ComplexityAssessment {
    std::int64_t global_rounds = 0;
    std::int64_t num_clients = 0;
    double selection_rate = 0.0;
    double avg_local_rounds = 0.0;
    std::optional<double> avg_dataset_size;  // samples
    std::optional<double> model_size;        // parameters
};

CarbonIntensityAssessment assess_carbon(const FederationConfig& config, const ReferenceData& ref);
HardwareAssessment assess_hardware(const FederationConfig& config, const HardwareTable& hw);
ComplexityAssessment assess_complexity(const FederationConfig& config);

struct SustainabilityAssessment {
    CarbonIntensityAssessment carbon;
    HardwareAssessment hardware;
    ComplexityAssessment complexity;
};

SustainabilityAssessment assess_sustainability(const FederationConfig& config,
                                               const ReferenceData& ref);

// Default weights: equal metric weights inside each notion, notions
// 0.5 (carbon) / 0.25 (hardware) / 0.25 (complexity).
ScoreNode build_sustainability_pillar(const SustainabilityAssessment& assessment,
                                      double pillar_weight = 1.0);

}  // namespace fedsust
