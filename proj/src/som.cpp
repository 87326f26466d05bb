#include "verbseq/som.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "verbseq/errors.hpp"
#include "verbseq/rng.hpp"

namespace verbseq {

namespace {

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

int chebyshev_grid_distance(const SomMap& map, int u, int v) {
    int dr = std::abs(map.grid_row(u) - map.grid_row(v));
    int dc = std::abs(map.grid_col(u) - map.grid_col(v));
    return std::max(dr, dc);
}

int bmu_index(const SomMap& map, const std::vector<double>& sample) {
    int best = 0;
    double best_d = squared_distance(map.prototypes[0], sample);
    for (int u = 1; u < map.unit_count(); ++u) {
        double d = squared_distance(map.prototypes[u], sample);
        if (d < best_d) {
            best_d = d;
            best = u;
        }
    }
    return best;
}

}  // namespace

void som_epoch(SomMap& map, const std::vector<std::vector<double>>& samples,
               double radius) {
    const int units = map.unit_count();
    const int dim = map.input_dim;

    // Aggregate samples by BMU first; the weighted means then only need
    // unit-to-unit neighborhood terms.
    std::vector<std::vector<double>> bmu_sum(units, std::vector<double>(dim, 0.0));
    std::vector<double> bmu_count(units, 0.0);
    for (const auto& s : samples) {
        int b = bmu_index(map, s);
        for (int d = 0; d < dim; ++d) bmu_sum[b][d] += s[d];
        bmu_count[b] += 1.0;
    }

    const double denom = 2.0 * radius * radius;
    std::vector<std::vector<double>> next(units, std::vector<double>(dim, 0.0));
    for (int k = 0; k < units; ++k) {
        double weight_mass = 0.0;
        for (int b = 0; b < units; ++b) {
            if (bmu_count[b] == 0.0) continue;
            int g = chebyshev_grid_distance(map, b, k);
            double h = denom > 0.0 ? std::exp(-(double(g) * g) / denom)
                                   : (g == 0 ? 1.0 : 0.0);
            if (h == 0.0) continue;
            weight_mass += h * bmu_count[b];
            for (int d = 0; d < dim; ++d) next[k][d] += h * bmu_sum[b][d];
        }
        if (weight_mass < 1e-12) {
            next[k] = map.prototypes[k];  // unreached unit keeps its prototype
        } else {
            for (int d = 0; d < dim; ++d) next[k][d] /= weight_mass;
        }
    }
    map.prototypes = std::move(next);
}

SomMap train_som(const std::vector<std::vector<double>>& samples,
                 const SomConfig& config) {
    if (samples.empty()) throw EmptySamplesError("train_som: no samples");
    const int dim = static_cast<int>(samples[0].size());
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != dim) {
            throw DimensionMismatchError("train_som: inconsistent sample dimensions");
        }
    }
    if (config.rows < 1 || config.cols < 1) {
        throw InvalidKError("train_som: grid dimensions must be >= 1");
    }

    SomMap map;
    map.rows = config.rows;
    map.cols = config.cols;
    map.input_dim = dim;
    map.schedule = config;

    std::mt19937_64 rng(config.seed);
    map.prototypes.reserve(map.unit_count());
    for (int u = 0; u < map.unit_count(); ++u) {
        map.prototypes.push_back(samples[uniform_index(rng, samples.size())]);
    }

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double t = config.epochs > 1
                       ? static_cast<double>(epoch) / (config.epochs - 1)
                       : 1.0;
        double radius =
            config.initial_radius + t * (config.final_radius - config.initial_radius);
        som_epoch(map, samples, radius);
    }
    return map;
}

std::pair<int, double> best_matching_unit(const SomMap& map,
                                          const std::vector<double>& sample) {
    if (static_cast<int>(sample.size()) != map.input_dim) {
        throw DimensionMismatchError("best_matching_unit: sample dim " +
                                     std::to_string(sample.size()) + " != map dim " +
                                     std::to_string(map.input_dim));
    }
    int b = bmu_index(map, sample);
    return {b, std::sqrt(squared_distance(map.prototypes[b], sample))};
}

double quantization_error(const SomMap& map,
                          const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) throw EmptySamplesError("quantization_error: no samples");
    double total = 0.0;
    for (const auto& s : samples) total += best_matching_unit(map, s).second;
    return total / static_cast<double>(samples.size());
}

namespace {

std::vector<double> normalized_block(const std::vector<double>& proto, int begin,
                                     int len) {
    std::vector<double> block(proto.begin() + begin, proto.begin() + begin + len);
    double sum = 0.0;
    for (double& v : block) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (sum <= 0.0) {
        std::fill(block.begin(), block.end(), 1.0 / len);
    } else {
        for (double& v : block) v /= sum;
    }
    return block;
}

std::pair<Category, Tense> block_argmax(const std::vector<double>& cat,
                                        const std::vector<double>& tense) {
    int bc = 0;
    for (int i = 1; i < kNumCategories; ++i) {
        if (cat[i] > cat[bc]) bc = i;
    }
    int bt = 0;
    for (int i = 1; i < kNumTenses; ++i) {
        if (tense[i] > tense[bt]) bt = i;
    }
    return {static_cast<Category>(bc), static_cast<Tense>(bt)};
}

}  // namespace

std::pair<Category, Tense> DecodedPrototype::first_argmax() const {
    return block_argmax(first_category, first_tense);
}

std::pair<Category, Tense> DecodedPrototype::second_argmax() const {
    return block_argmax(second_category, second_tense);
}

DecodedPrototype decode_prototype(const SomMap& map, int unit) {
    if (unit < 0 || unit >= map.unit_count()) {
        throw IndexOutOfRangeError("decode_prototype: unit " + std::to_string(unit) +
                                   " outside [0, " + std::to_string(map.unit_count()) +
                                   ")");
    }
    const auto& p = map.prototypes[unit];
    DecodedPrototype d;
    d.first_category = normalized_block(p, 0, kNumCategories);
    d.first_tense = normalized_block(p, kNumCategories, kNumTenses);
    d.second_category = normalized_block(p, kVerbDim, kNumCategories);
    d.second_tense = normalized_block(p, kVerbDim + kNumCategories, kNumTenses);
    return d;
}

std::vector<std::size_t> hit_histogram(
    const SomMap& map, const std::vector<std::vector<double>>& samples) {
    std::vector<std::size_t> hits(map.unit_count(), 0);
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != map.input_dim) {
            throw DimensionMismatchError("hit_histogram: sample dimension mismatch");
        }
        ++hits[bmu_index(map, s)];
    }
    return hits;
}

std::vector<std::vector<double>> sample_vectors(
    const std::vector<TransitionSample>& samples) {
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        out.emplace_back(s.vector.begin(), s.vector.end());
    }
    return out;
}

}  // namespace verbseq
