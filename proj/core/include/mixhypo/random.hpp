#pragma once

#include <cstdint>
#include <random>

namespace mixhypo {

// Seeded uniform stream. Wraps std::mt19937_64 (bit-exact across platforms)
// with a fixed 53-bit mapping to (0,1), so that sequences are reproducible
// from the seed alone. A stream must not be shared across concurrent
// callers; use split() to derive independent child streams.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw strictly inside (0,1): ((x >> 11) + 0.5) * 2^-53.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Independent child stream; advances this stream by one draw.
    RandomStream split() { return RandomStream(mix64(engine_())); }

private:
    // splitmix64 finalizer; decorrelates child seeds.
    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace mixhypo
