#include "fedsust/rng.hpp"

#include <cstdio>

namespace fedsust {

std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
    std::uint64_t key = mix64(seed ^ kGoldenGamma);
    for (const std::uint64_t w : words) {
        key = mix64(key ^ mix64(w + kGoldenGamma));
    }
    return key;
}

namespace {
__extension__ typedef unsigned __int128 u128;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    // Lemire, "Fast Random Integer Generation in an Interval" (2019).
    u128 product = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<u128>(next()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace fedsust
