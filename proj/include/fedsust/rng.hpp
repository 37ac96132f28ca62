#pragma once

// Deterministic, counter-based randomness and hashing.
//
// Every random stream is a SplitMix64 sequence whose starting state is
// derived from (seed, stream tag, indices) by `derive_key`, so any draw can
// be recomputed from its coordinates alone, independent of thread schedule.
//
//   mix64(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//               return z ^ (z >> 31)
//   next():     state += 0x9E3779B97F4A7C15; return mix64(state)
//   below(n):   Lemire multiply-shift with rejection, unbiased on [0, n)

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace fedsust {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Folds a sequence of words into a stream key.
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> words);

// Stream tags for derive_key.
enum class Stream : std::uint64_t {
    sampling = 1,
    local_update = 2,
    labels = 3,
    salt = 4,
    initial_model = 5,
};

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform on [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    // Uniform on [0, 1) with 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t value);

}  // namespace fedsust
