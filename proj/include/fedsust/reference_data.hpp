#pragma once

// Bundled lookup datasets: country grid carbon intensity, processor power
// performance, and address -> country resolution. Tables are loaded once and
// treated as immutable afterwards.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fedsust {

// Theoretical grid bounds (all-wind / all-coal), gCO2eq per kWh.
inline constexpr double kTheoreticalMinIntensity = 11.0;
inline constexpr double kTheoreticalMaxIntensity = 820.0;
// Observed country bounds (Lesotho / Botswana); the carbon metrics
// normalize over this range.
inline constexpr double kCountryMinIntensity = 20.0;
inline constexpr double kCountryMaxIntensity = 795.0;

// Power-performance range of known processors (marks per watt).
inline constexpr double kMinPowerPerformance = 20.0;
inline constexpr double kMaxPowerPerformance = 1447.0;

struct GridIntensityTable {
    std::map<std::string, double> entries;  // ISO 3166-1 alpha-2 -> gCO2eq/kWh
};

GridIntensityTable load_grid_table(const std::filesystem::path& path);

// Throws ReferenceDataError("unknown grid: XX").
double lookup_intensity(const GridIntensityTable& table, std::string_view country);

enum class ProcessorKind { cpu, gpu };

std::string_view to_string(ProcessorKind kind);

struct HardwareProfile {
    std::string model;
    ProcessorKind kind = ProcessorKind::cpu;
    double benchmark = 0.0;          // benchmark mark
    double tdp = 0.0;                // watts
    double power_performance = 0.0;  // marks per watt
};

double power_performance(double benchmark, double tdp_watts);

// Lower-cases and collapses runs of whitespace; the lookup key for models.
std::string normalize_model_name(std::string_view model);

struct HardwareTable {
    std::map<std::string, HardwareProfile> entries;  // keyed by normalize_model_name

    // Throws ReferenceDataError naming the model string.
    const HardwareProfile& lookup(std::string_view model) const;
};

HardwareTable load_hardware_table(const std::filesystem::path& path);

struct LocationRange {
    std::uint32_t network = 0;
    int prefix_length = 0;
    std::string country;
};

struct LocationMap {
    std::vector<LocationRange> ranges;
};

LocationMap load_location_map(const std::filesystem::path& path);

// Two upper-case letters pass through as a country code; anything else must
// be an IPv4 address covered by a CIDR range (longest prefix wins).
// Throws ReferenceDataError("unresolvable location: ...").
std::string resolve_location(std::string_view address, const LocationMap& map);

struct ReferenceData {
    GridIntensityTable grid;
    HardwareTable hardware;
    LocationMap locations;

    // Resolves and looks up in one step.
    double intensity_for(std::string_view location) const;
};

// $FEDSUST_DATA_DIR when set, else the directory baked in at build time.
std::filesystem::path default_data_dir();

// Reads grid_intensity.csv, hardware.csv and locations.csv from `dir`.
ReferenceData load_reference_data(const std::filesystem::path& dir);

}  // namespace fedsust
