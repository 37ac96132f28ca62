#include <algorithm>
#include <cstdint>

#include "fedsust/errors.hpp"
#include "fedsust/kernels.hpp"

namespace fedsust::kernels {

Vector aggregate_model(std::span<const Vector> updates) {
    if (updates.empty()) throw ValidationError("aggregate_model: no updates");
    const std::size_t n = updates.front().size();
    for (const auto& u : updates) {
        if (u.size() != n) throw ValidationError("aggregate_model: update length mismatch");
    }
    Vector out(n, 0.0);
    const double inv = 1.0 / static_cast<double>(updates.size());
    // Threads own contiguous element blocks; inside a block the update loop
    // is outermost so each pass streams one vector. Per element the sum is
    // still taken in update order, matching the serial reference bit for bit.
    constexpr std::int64_t kBlock = 512;
    const auto count = static_cast<std::int64_t>(n);
    const std::int64_t blocks = (count + kBlock - 1) / kBlock;
    const std::size_t k = updates.size();
#pragma omp parallel for schedule(static) if (n * k > 16384)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const auto lo = static_cast<std::size_t>(b * kBlock);
        const auto hi = std::min(n, lo + static_cast<std::size_t>(kBlock));
        double* dst = out.data();
        for (std::size_t i = 0; i < k; ++i) {
            const double* src = updates[i].data();
            for (std::size_t j = lo; j < hi; ++j) dst[j] += src[j];
        }
        for (std::size_t j = lo; j < hi; ++j) dst[j] *= inv;
    }
    return out;
}

void local_update(std::span<const double> global, std::uint64_t key, std::span<double> out) {
    if (global.size() != out.size()) throw ValidationError("local_update: size mismatch");
    const auto count = static_cast<std::int64_t>(global.size());
#pragma omp simd
    for (std::int64_t j = 0; j < count; ++j) {
        const auto u = static_cast<std::size_t>(j);
        out[u] = 0.9 * global[u] + 0.1 * (2.0 * update_draw(key, u) - 1.0);
    }
}

}  // namespace fedsust::kernels
