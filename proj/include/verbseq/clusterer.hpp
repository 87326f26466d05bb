#ifndef VERBSEQ_CLUSTERER_HPP
#define VERBSEQ_CLUSTERER_HPP

#include <vector>

namespace verbseq {

// Partition of n vectors into k clusters around medoids.
struct ClusterAssignment {
    int k = 0;
    std::vector<int> labels;   // per input vector, in [0, k)
    std::vector<int> medoids;  // k vector indices, ascending
};

// Davies-Bouldin diagnostics for a partition.
struct ClusterQuality {
    int k = 0;
    std::vector<double> dispersions;               // S_i, per cluster
    std::vector<std::vector<double>> separations;  // M_ij, centroid distances
    double db_score = 0.0;  // +inf when centroids coincide
    bool coincident_centroids = false;
};

struct KSelection {
    int best_k = 0;
    std::vector<int> ks;
    std::vector<ClusterAssignment> assignments;  // parallel to ks
    std::vector<ClusterQuality> qualities;       // parallel to ks
};

// Symmetric Euclidean distance matrix; needs at least 2 vectors.
std::vector<std::vector<double>> distance_matrix(
    const std::vector<std::vector<double>>& vectors);

// PAM k-medoids over a precomputed distance matrix: greedy BUILD, then
// best-improvement SWAP until no swap lowers total cost. Deterministic;
// point-to-medoid ties go to the lower medoid index.
ClusterAssignment cluster_prototypes(
    const std::vector<std::vector<double>>& distances, int k);

// S_i = mean member distance to the cluster centroid, M_ij = centroid
// distance, db = mean over i of max_j (S_i+S_j)/M_ij.
ClusterQuality davies_bouldin(const std::vector<std::vector<double>>& vectors,
                              const ClusterAssignment& assignment);

// Clusters for every k in [k_min, k_max]; picks the smallest k attaining
// the minimum Davies-Bouldin score.
KSelection select_k(const std::vector<std::vector<double>>& vectors, int k_min,
                    int k_max);

}  // namespace verbseq

#endif
