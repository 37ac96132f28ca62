#include "fedsust/reference_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "fedsust/csv.hpp"
#include "fedsust/errors.hpp"

namespace fedsust {

namespace {

bool is_country_code(std::string_view s) {
    return s.size() == 2 && std::isupper(static_cast<unsigned char>(s[0])) &&
           std::isupper(static_cast<unsigned char>(s[1]));
}

std::optional<std::uint32_t> parse_ipv4(std::string_view s) {
    std::uint32_t value = 0;
    int octets = 0;
    std::size_t i = 0;
    while (octets < 4) {
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        unsigned part = 0;
        std::size_t digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            part = part * 10 + static_cast<unsigned>(s[i] - '0');
            ++i;
            if (++digits > 3 || part > 255) return std::nullopt;
        }
        value = (value << 8) | part;
        ++octets;
        if (octets < 4) {
            if (i >= s.size() || s[i] != '.') return std::nullopt;
            ++i;
        }
    }
    if (i != s.size()) return std::nullopt;
    return value;
}

std::uint32_t mask_for(int prefix_length) {
    return prefix_length == 0 ? 0u : ~std::uint32_t{0} << (32 - prefix_length);
}

// Loader failures are reference-data problems regardless of their cause.
template <typename F>
auto load_guarded(const std::filesystem::path& path, F&& body) {
    try {
        return body(csv::read_file(path));
    } catch (const ValidationError& e) {
        throw ReferenceDataError(e.what());
    }
}

// Four significant digits.
bool same_to_4_digits(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return true;
    const double unit = std::pow(10.0, std::floor(std::log10(scale)) - 3);
    return std::abs(a - b) <= 0.5 * unit + 1e-12 * scale;
}

}  // namespace

GridIntensityTable load_grid_table(const std::filesystem::path& path) {
    return load_guarded(path, [&](const csv::Table& t) {
        const std::string src = path.string();
        const auto c_code = t.column("country_code");
        const auto c_val = t.column("intensity_gco2_per_kwh");
        t.column("source");
        t.column("comment");
        GridIntensityTable table;
        for (const auto& row : t.rows) {
            const std::string& code = row.fields[c_code];
            if (!is_country_code(code)) {
                throw ValidationError(src + ":" + std::to_string(row.line) +
                                      ": column 'country_code': not an ISO alpha-2 code: '" +
                                      code + "'");
            }
            const double v =
                csv::parse_number(row.fields[c_val], src, row.line, "intensity_gco2_per_kwh");
            if (v < kTheoreticalMinIntensity || v > kTheoreticalMaxIntensity) {
                throw ValidationError(src + ":" + std::to_string(row.line) +
                                      ": column 'intensity_gco2_per_kwh': outside [11, 820]");
            }
            if (!table.entries.emplace(code, v).second) {
                throw ValidationError(src + ":" + std::to_string(row.line) +
                                      ": duplicate country code " + code);
            }
        }
        if (table.entries.empty()) {
            throw ValidationError(src + ": no grid intensity rows");
        }
        return table;
    });
}

double lookup_intensity(const GridIntensityTable& table, std::string_view country) {
    const auto it = table.entries.find(std::string(country));
    if (it == table.entries.end()) {
        throw ReferenceDataError("unknown grid: " + std::string(country));
    }
    return it->second;
}

std::string_view to_string(ProcessorKind kind) {
    return kind == ProcessorKind::gpu ? "GPU" : "CPU";
}

double power_performance(double benchmark, double tdp_watts) {
    if (!(benchmark > 0.0) || !(tdp_watts > 0.0) || !std::isfinite(benchmark) ||
        !std::isfinite(tdp_watts)) {
        throw ValidationError("power performance: benchmark and TDP must be positive");
    }
    return benchmark / tdp_watts;
}

std::string normalize_model_name(std::string_view model) {
    std::string out;
    bool pending_space = false;
    for (const char ch : model) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

const HardwareProfile& HardwareTable::lookup(std::string_view model) const {
    const auto it = entries.find(normalize_model_name(model));
    if (it == entries.end()) {
        throw ReferenceDataError("unknown hardware model: " + std::string(model));
    }
    return it->second;
}

HardwareTable load_hardware_table(const std::filesystem::path& path) {
    return load_guarded(path, [&](const csv::Table& t) {
        const std::string src = path.string();
        const auto c_model = t.column("model");
        const auto c_kind = t.column("kind");
        const auto c_bench = t.column("benchmark_mark");
        const auto c_tdp = t.column("tdp_watts");
        const auto c_pp = t.column("power_performance");
        HardwareTable table;
        for (const auto& row : t.rows) {
            const auto at = [&](const char* col) {
                return src + ":" + std::to_string(row.line) + ": column '" + col + "': ";
            };
            HardwareProfile p;
            p.model = row.fields[c_model];
            if (normalize_model_name(p.model).empty()) {
                throw ValidationError(at("model") + "empty model name");
            }
            const std::string& kind = row.fields[c_kind];
            if (kind == "CPU") {
                p.kind = ProcessorKind::cpu;
            } else if (kind == "GPU") {
                p.kind = ProcessorKind::gpu;
            } else {
                throw ValidationError(at("kind") + "expected CPU or GPU, got '" + kind + "'");
            }
            p.benchmark = csv::parse_number(row.fields[c_bench], src, row.line, "benchmark_mark");
            p.tdp = csv::parse_number(row.fields[c_tdp], src, row.line, "tdp_watts");
            if (!(p.benchmark > 0.0)) throw ValidationError(at("benchmark_mark") + "must be > 0");
            if (!(p.tdp > 0.0)) throw ValidationError(at("tdp_watts") + "must be > 0");
            const double stored =
                csv::parse_number(row.fields[c_pp], src, row.line, "power_performance");
            p.power_performance = power_performance(p.benchmark, p.tdp);
            if (!same_to_4_digits(stored, p.power_performance)) {
                throw ValidationError(at("power_performance") +
                                      "does not match benchmark_mark / tdp_watts");
            }
            if (!table.entries.emplace(normalize_model_name(p.model), p).second) {
                throw ValidationError(at("model") + "duplicate model '" + p.model + "'");
            }
        }
        return table;
    });
}

LocationMap load_location_map(const std::filesystem::path& path) {
    return load_guarded(path, [&](const csv::Table& t) {
        const std::string src = path.string();
        const auto c_prefix = t.column("prefix");
        const auto c_code = t.column("country_code");
        LocationMap map;
        for (const auto& row : t.rows) {
            const std::string& prefix = row.fields[c_prefix];
            const auto slash = prefix.find('/');
            const auto bad = [&](const std::string& why) {
                return ValidationError(src + ":" + std::to_string(row.line) +
                                       ": column 'prefix': " + why);
            };
            if (slash == std::string::npos) throw bad("expected CIDR a.b.c.d/len");
            const auto addr = parse_ipv4(std::string_view(prefix).substr(0, slash));
            if (!addr) throw bad("invalid IPv4 address");
            const double len =
                csv::parse_number(prefix.substr(slash + 1), src, row.line, "prefix");
            if (len < 0 || len > 32 || len != std::floor(len)) throw bad("invalid prefix length");
            LocationRange r;
            r.prefix_length = static_cast<int>(len);
            r.network = *addr & mask_for(r.prefix_length);
            r.country = row.fields[c_code];
            if (!is_country_code(r.country)) {
                throw ValidationError(src + ":" + std::to_string(row.line) +
                                      ": column 'country_code': not an ISO alpha-2 code");
            }
            map.ranges.push_back(std::move(r));
        }
        return map;
    });
}

std::string resolve_location(std::string_view address, const LocationMap& map) {
    if (is_country_code(address)) return std::string(address);
    const auto ip = parse_ipv4(address);
    if (ip) {
        const LocationRange* best = nullptr;
        for (const auto& r : map.ranges) {
            if ((*ip & mask_for(r.prefix_length)) == r.network &&
                (best == nullptr || r.prefix_length > best->prefix_length)) {
                best = &r;
            }
        }
        if (best != nullptr) return best->country;
    }
    throw ReferenceDataError("unresolvable location: " + std::string(address));
}

double ReferenceData::intensity_for(std::string_view location) const {
    return lookup_intensity(grid, resolve_location(location, locations));
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("FEDSUST_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return FEDSUST_DEFAULT_DATA_DIR;
}

ReferenceData load_reference_data(const std::filesystem::path& dir) {
    ReferenceData data;
    data.grid = load_grid_table(dir / "grid_intensity.csv");
    data.hardware = load_hardware_table(dir / "hardware.csv");
    data.locations = load_location_map(dir / "locations.csv");
    return data;
}

}  // namespace fedsust
