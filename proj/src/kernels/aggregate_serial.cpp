#include "fedsust/errors.hpp"
#include "fedsust/kernels.hpp"
#include "fedsust/rng.hpp"

namespace fedsust::kernels {

namespace {

void check_shapes(std::span<const Vector> updates) {
    if (updates.empty()) throw ValidationError("aggregate_model: no updates");
    const auto n = updates.front().size();
    for (const auto& u : updates) {
        if (u.size() != n) throw ValidationError("aggregate_model: update length mismatch");
    }
}

}  // namespace

double update_draw(std::uint64_t key, std::uint64_t j) {
    return static_cast<double>(mix64(key + (j + 1) * kGoldenGamma) >> 11) * 0x1.0p-53;
}

Vector aggregate_model_serial(std::span<const Vector> updates) {
    check_shapes(updates);
    const std::size_t n = updates.front().size();
    Vector out(n, 0.0);
    for (const auto& u : updates) {
        for (std::size_t j = 0; j < n; ++j) out[j] += u[j];
    }
    const double inv = 1.0 / static_cast<double>(updates.size());
    for (auto& v : out) v *= inv;
    return out;
}

void local_update_serial(std::span<const double> global, std::uint64_t key, std::span<double> out) {
    if (global.size() != out.size()) throw ValidationError("local_update: size mismatch");
    for (std::size_t j = 0; j < global.size(); ++j) {
        out[j] = 0.9 * global[j] + 0.1 * (2.0 * update_draw(key, j) - 1.0);
    }
}

}  // namespace fedsust::kernels
