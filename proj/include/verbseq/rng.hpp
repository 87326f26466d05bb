#ifndef VERBSEQ_RNG_HPP
#define VERBSEQ_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace verbseq {

// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Named substream of a run seed, e.g. substream(seed, "som").
// Same (seed, name, index) always yields the same seed.
inline std::uint64_t substream(std::uint64_t seed, std::string_view name,
                               std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the name
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(seed ^ mix64(h) ^ mix64(index + 1));
}

// The distributions below avoid std::uniform_*_distribution, whose output
// is implementation-defined; these are reproducible everywhere.

// Uniform double in [0, 1).
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n). Modulo bias is negligible for our n (< 2^32).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

// Draw an index from an unnormalized non-negative weight vector.
inline std::size_t sample_discrete(std::mt19937_64& rng,
                                   const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform_double(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

}  // namespace verbseq

#endif
