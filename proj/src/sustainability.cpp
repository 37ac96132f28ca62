#include "fedsust/sustainability.hpp"

#include <numeric>

namespace fedsust {

namespace {

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

CarbonIntensityAssessment assess_carbon(const FederationConfig& config, const ReferenceData& ref) {
    CarbonIntensityAssessment a;
    for (const auto& e : config.client_locations.entries) {
        a.client_avg += e.share * ref.intensity_for(e.value);
    }
    a.server = ref.intensity_for(config.server_location);
    a.total = a.server + a.client_avg;
    return a;
}

HardwareAssessment assess_hardware(const FederationConfig& config, const HardwareTable& hw) {
    HardwareAssessment a;
    for (const auto& e : config.client_hardware.entries) {
        a.client_avg_pp += e.share * hw.lookup(e.value).power_performance;
    }
    a.server_pp = hw.lookup(config.server_hardware).power_performance;
    a.total = a.server_pp + a.client_avg_pp;
    return a;
}

ComplexityAssessment assess_complexity(const FederationConfig& config) {
    validate_config(config);
    ComplexityAssessment a;
    a.global_rounds = config.total_rounds;
    a.num_clients = config.num_clients;
    a.selection_rate = config.selection_rate;
    a.avg_local_rounds = mean(config.local_rounds);
    if (config.dataset_sizes) a.avg_dataset_size = mean(*config.dataset_sizes);
    a.model_size = config.model_size;
    return a;
}

SustainabilityAssessment assess_sustainability(const FederationConfig& config,
                                               const ReferenceData& ref) {
    return {assess_carbon(config, ref), assess_hardware(config, ref.hardware),
            assess_complexity(config)};
}

ScoreNode build_sustainability_pillar(const SustainabilityAssessment& s, double pillar_weight) {
    const auto carbon_rule =
        NormalizationRule::linear_inverse(kCountryMinIntensity, kCountryMaxIntensity);
    const auto hardware_rule =
        NormalizationRule::linear_direct(kMinPowerPerformance, kMaxPowerPerformance);
    const auto counts = NormalizationRule::log_bucket(count_anchors());
    const auto sizes = NormalizationRule::log_bucket(size_anchors());

    auto carbon = ScoreNode::group(
        ids::kCarbon, NodeKind::notion, 0.5,
        {ScoreNode::metric(ids::kCarbonClient, 0.5, carbon_rule, s.carbon.client_avg),
         ScoreNode::metric(ids::kCarbonServer, 0.5, carbon_rule, s.carbon.server)});

    auto hardware = ScoreNode::group(
        ids::kHardware, NodeKind::notion, 0.25,
        {ScoreNode::metric(ids::kHardwareClient, 0.5, hardware_rule, s.hardware.client_avg_pp),
         ScoreNode::metric(ids::kHardwareServer, 0.5, hardware_rule, s.hardware.server_pp)});

    const double sixth = 1.0 / 6.0;
    const auto& c = s.complexity;
    auto complexity = ScoreNode::group(
        ids::kComplexity, NodeKind::notion, 0.25,
        {ScoreNode::metric(ids::kGlobalRounds, sixth, counts,
                           static_cast<double>(c.global_rounds)),
         ScoreNode::metric(ids::kNumClients, sixth, counts, static_cast<double>(c.num_clients)),
         ScoreNode::metric(ids::kSelectionRate, sixth, NormalizationRule::selection_rate(),
                           c.selection_rate),
         ScoreNode::metric(ids::kLocalRounds, sixth, counts, c.avg_local_rounds),
         ScoreNode::metric(ids::kDatasetSize, sixth, sizes, c.avg_dataset_size),
         ScoreNode::metric(ids::kModelSize, sixth, sizes, c.model_size)});

    return ScoreNode::group(ids::kSustainability, NodeKind::pillar, pillar_weight,
                            {std::move(carbon), std::move(hardware), std::move(complexity)});
}

}  // namespace fedsust
