#ifndef VERBSEQ_SOM_HPP
#define VERBSEQ_SOM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "verbseq/corpus.hpp"

namespace verbseq {

struct SomConfig {
    int rows = 8;
    int cols = 8;
    int epochs = 50;
    double initial_radius = 4.0;
    double final_radius = 0.5;
    std::uint64_t seed = 1;
};

// Rectangular batch-trained map. Prototypes live in input space and are
// decodable back into per-position category/tense distributions.
struct SomMap {
    int rows = 0;
    int cols = 0;
    int input_dim = 0;
    SomConfig schedule;
    std::vector<std::vector<double>> prototypes;  // rows*cols, row-major grid

    int unit_count() const { return rows * cols; }
    int grid_row(int unit) const { return unit / cols; }
    int grid_col(int unit) const { return unit % cols; }
};

// Per-position (first/second verb) distributions recovered from a prototype.
struct DecodedPrototype {
    std::vector<double> first_category;   // 4, sums to 1
    std::vector<double> first_tense;      // 9, sums to 1
    std::vector<double> second_category;  // 4
    std::vector<double> second_tense;     // 9

    std::pair<Category, Tense> first_argmax() const;
    std::pair<Category, Tense> second_argmax() const;
};

// Batch SOM: per epoch, assign every sample to its BMU, then set each
// prototype to the Gaussian-neighborhood-weighted mean of the samples.
// Radius decays linearly from initial_radius to final_radius across epochs.
// Prototypes are initialized by sampling from the data with the given seed;
// the whole routine is deterministic.
SomMap train_som(const std::vector<std::vector<double>>& samples,
                 const SomConfig& config);

// One batch update at a fixed radius; exposed for refinement diagnostics.
void som_epoch(SomMap& map, const std::vector<std::vector<double>>& samples,
               double radius);

// Nearest prototype by Euclidean distance; ties break to the lowest index.
std::pair<int, double> best_matching_unit(const SomMap& map,
                                          const std::vector<double>& sample);

// Mean BMU distance over the samples.
double quantization_error(const SomMap& map,
                          const std::vector<std::vector<double>>& samples);

// Slices a prototype into category/tense blocks, clamps negatives, and
// normalizes each block to sum 1 (a zero block becomes uniform).
DecodedPrototype decode_prototype(const SomMap& map, int unit);

// Per-unit BMU hit counts; sums to samples.size().
std::vector<std::size_t> hit_histogram(
    const SomMap& map, const std::vector<std::vector<double>>& samples);

// Convenience: strips TransitionSamples down to their vectors.
std::vector<std::vector<double>> sample_vectors(
    const std::vector<TransitionSample>& samples);

}  // namespace verbseq

#endif
