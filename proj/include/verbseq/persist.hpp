#ifndef VERBSEQ_PERSIST_HPP
#define VERBSEQ_PERSIST_HPP

#include <string>
#include <utility>
#include <vector>

#include "verbseq/clusterer.hpp"
#include "verbseq/markov.hpp"
#include "verbseq/som.hpp"
#include "verbseq/synth.hpp"

namespace verbseq {

// Clustering over the map's non-empty units, expressed in unit ids.
struct ClusteringArtifact {
    int k = 0;
    std::vector<int> units;    // clustered unit ids
    std::vector<int> labels;   // parallel to units
    std::vector<int> medoids;  // unit ids
    double db_score = 0.0;
    std::vector<std::pair<int, double>> per_k_scores;
};

struct EmpiricalMatrixArtifact {
    int alphabet_size = 0;
    double alpha = 0.0;
    std::vector<std::vector<double>> matrix;
};

// All files are JSON with doubles written at 17 significant digits, so that
// save/load round-trips are exact and repeated runs are byte-identical.

void save_som(const SomMap& map, const std::string& path);
SomMap load_som(const std::string& path);

void save_hmm(const BaumWelchResult& result, const std::string& path);
BaumWelchResult load_hmm(const std::string& path);

void save_clustering(const ClusteringArtifact& artifact, const std::string& path);
ClusteringArtifact load_clustering(const std::string& path);

void save_empirical(const EmpiricalMatrixArtifact& artifact,
                    const std::string& path);
EmpiricalMatrixArtifact load_empirical(const std::string& path);

void save_regime_spec(const RegimeSpec& spec, const std::string& path);
RegimeSpec load_regime_spec(const std::string& path);

// %.17g, with non-finite values mapped to null on write and back on read.
std::string format_double(double v);

}  // namespace verbseq

#endif
