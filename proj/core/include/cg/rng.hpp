#pragma once

#include <cstdint>

namespace cg {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream tags. Each (seed, tag, index) triple names an independent substream,
// so row i of a weight matrix draws the same numbers whatever m and n are.
enum class Tag : std::uint64_t {
    Alpha = 1,
    Beta = 2,
    Interior = 3,
    BoundaryRow = 4,
    BoundaryCol = 5,
    Replica = 6,
    Aux = 7,
};

class Stream {
public:
    Stream(std::uint64_t seed, Tag tag, std::uint64_t index = 0)
        : state_(mix64(mix64(seed + 0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(tag)) ^
                       (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL))) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Seed for replica r of an ensemble.
inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t r) {
    return Stream(seed, Tag::Replica, r).next();
}

} // namespace cg
