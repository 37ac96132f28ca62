#pragma once

// Data-parallel inner loops of the simulator. Each kernel has a serial
// reference (`*_serial`) kept for testing and benchmarking; the OpenMP
// versions must produce bit-identical results for any thread count.

#include <cstdint>
#include <span>
#include <vector>

namespace fedsust::kernels {

using Vector = std::vector<double>;

// Element-wise arithmetic mean of equally sized vectors. Each element is
// summed in update order, so the result does not depend on scheduling.
Vector aggregate_model_serial(std::span<const Vector> updates);
Vector aggregate_model(std::span<const Vector> updates);

// Deterministic stand-in for local training: every element is pulled toward
// a value drawn from the counter-based stream `key`,
//   out[j] = 0.9 * global[j] + 0.1 * (2 u_j - 1),  u_j = U[0,1)(key, j)
// which keeps the vector bounded in [-1, 1] once started there.
void local_update_serial(std::span<const double> global, std::uint64_t key, std::span<double> out);
void local_update(std::span<const double> global, std::uint64_t key, std::span<double> out);

// The draw used by local_update for element j.
double update_draw(std::uint64_t key, std::uint64_t j);

}  // namespace fedsust::kernels
