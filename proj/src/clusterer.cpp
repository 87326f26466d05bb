#include "verbseq/clusterer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "verbseq/errors.hpp"

namespace verbseq {

namespace {

double total_cost(const std::vector<std::vector<double>>& d,
                  const std::vector<int>& medoids) {
    double cost = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int m : medoids) best = std::min(best, d[j][m]);
        cost += best;
    }
    return cost;
}

std::vector<int> assign_labels(const std::vector<std::vector<double>>& d,
                               const std::vector<int>& medoids) {
    std::vector<int> labels(d.size(), -1);
    for (std::size_t c = 0; c < medoids.size(); ++c) labels[medoids[c]] = int(c);
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (labels[j] >= 0) continue;  // medoids stay in their own cluster
        int best_c = 0;
        double best_d = d[j][medoids[0]];
        for (std::size_t c = 1; c < medoids.size(); ++c) {
            double dist = d[j][medoids[c]];
            if (dist < best_d) {  // ties keep the lower medoid index
                best_d = dist;
                best_c = int(c);
            }
        }
        labels[j] = best_c;
    }
    return labels;
}

}  // namespace

std::vector<std::vector<double>> distance_matrix(
    const std::vector<std::vector<double>>& vectors) {
    if (vectors.size() < 2) {
        throw TooFewVectorsError("distance_matrix: need at least 2 vectors, got " +
                                 std::to_string(vectors.size()));
    }
    const std::size_t n = vectors.size();
    const std::size_t dim = vectors[0].size();
    for (const auto& v : vectors) {
        if (v.size() != dim) {
            throw DimensionMismatchError("distance_matrix: inconsistent dimensions");
        }
    }
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t x = 0; x < dim; ++x) {
                double diff = vectors[i][x] - vectors[j][x];
                sum += diff * diff;
            }
            double dist = std::sqrt(sum);
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    return d;
}

ClusterAssignment cluster_prototypes(
    const std::vector<std::vector<double>>& distances, int k) {
    const int n = static_cast<int>(distances.size());
    if (k < 2 || k > n) {
        throw InvalidKError("cluster_prototypes: k " + std::to_string(k) +
                            " outside [2, " + std::to_string(n) + "]");
    }

    // BUILD: first the most central point, then greedily the point whose
    // addition removes the most cost.
    std::vector<int> medoids;
    std::vector<bool> is_medoid(n, false);
    {
        int best = 0;
        double best_total = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double total = 0.0;
            for (int j = 0; j < n; ++j) total += distances[i][j];
            if (total < best_total) {
                best_total = total;
                best = i;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = true;
    }
    std::vector<double> nearest(n);
    for (int j = 0; j < n; ++j) nearest[j] = distances[j][medoids[0]];

    while (static_cast<int>(medoids.size()) < k) {
        int best = -1;
        double best_gain = -1.0;
        for (int cand = 0; cand < n; ++cand) {
            if (is_medoid[cand]) continue;
            double gain = 0.0;
            for (int j = 0; j < n; ++j) {
                if (distances[j][cand] < nearest[j]) {
                    gain += nearest[j] - distances[j][cand];
                }
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = cand;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = true;
        for (int j = 0; j < n; ++j) {
            nearest[j] = std::min(nearest[j], distances[j][best]);
        }
    }

    // SWAP: best-improvement until a local minimum.
    double cost = total_cost(distances, medoids);
    while (true) {
        double best_cost = cost;
        int best_m = -1, best_h = -1;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            int saved = medoids[mi];
            for (int h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                medoids[mi] = h;
                double c = total_cost(distances, medoids);
                if (c < best_cost) {
                    best_cost = c;
                    best_m = int(mi);
                    best_h = h;
                }
            }
            medoids[mi] = saved;
        }
        if (best_m < 0) break;
        is_medoid[medoids[best_m]] = false;
        is_medoid[best_h] = true;
        medoids[best_m] = best_h;
        cost = best_cost;
    }

    std::sort(medoids.begin(), medoids.end());
    ClusterAssignment result;
    result.k = k;
    result.medoids = medoids;
    result.labels = assign_labels(distances, medoids);
    return result;
}

ClusterQuality davies_bouldin(const std::vector<std::vector<double>>& vectors,
                              const ClusterAssignment& assignment) {
    const int k = assignment.k;
    if (k < 2) {
        throw SingletonPartitionError("davies_bouldin: need k >= 2, got " +
                                      std::to_string(k));
    }
    if (assignment.labels.size() != vectors.size()) {
        throw DimensionMismatchError("davies_bouldin: labels do not cover vectors");
    }
    const std::size_t dim = vectors.empty() ? 0 : vectors[0].size();

    std::vector<std::vector<double>> centroids(k, std::vector<double>(dim, 0.0));
    std::vector<int> sizes(k, 0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        int c = assignment.labels[i];
        if (c < 0 || c >= k) {
            throw InvalidKError("davies_bouldin: label outside [0, k)");
        }
        ++sizes[c];
        for (std::size_t x = 0; x < dim; ++x) centroids[c][x] += vectors[i][x];
    }
    for (int c = 0; c < k; ++c) {
        if (sizes[c] == 0) {
            throw InvalidKError("davies_bouldin: empty cluster " + std::to_string(c));
        }
        for (std::size_t x = 0; x < dim; ++x) centroids[c][x] /= sizes[c];
    }

    ClusterQuality q;
    q.k = k;
    q.dispersions.assign(k, 0.0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        int c = assignment.labels[i];
        double sum = 0.0;
        for (std::size_t x = 0; x < dim; ++x) {
            double diff = vectors[i][x] - centroids[c][x];
            sum += diff * diff;
        }
        q.dispersions[c] += std::sqrt(sum);
    }
    for (int c = 0; c < k; ++c) q.dispersions[c] /= sizes[c];

    q.separations.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double sum = 0.0;
            for (std::size_t x = 0; x < dim; ++x) {
                double diff = centroids[i][x] - centroids[j][x];
                sum += diff * diff;
            }
            double m = std::sqrt(sum);
            q.separations[i][j] = m;
            q.separations[j][i] = m;
            if (m == 0.0) q.coincident_centroids = true;
        }
    }

    if (q.coincident_centroids) {
        q.db_score = std::numeric_limits<double>::infinity();
        return q;
    }

    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            double r = (q.dispersions[i] + q.dispersions[j]) / q.separations[i][j];
            worst = std::max(worst, r);
        }
        total += worst;
    }
    q.db_score = total / k;
    return q;
}

KSelection select_k(const std::vector<std::vector<double>>& vectors, int k_min,
                    int k_max) {
    const int n = static_cast<int>(vectors.size());
    if (k_min < 2 || k_min > k_max || k_max > n - 1) {
        throw InvalidKError("select_k: need 2 <= k_min <= k_max <= n-1 (n = " +
                            std::to_string(n) + ")");
    }
    auto distances = distance_matrix(vectors);

    KSelection sel;
    sel.best_k = k_min;
    double best_score = std::numeric_limits<double>::infinity();
    for (int k = k_min; k <= k_max; ++k) {
        auto assignment = cluster_prototypes(distances, k);
        auto quality = davies_bouldin(vectors, assignment);
        if (quality.db_score < best_score) {  // ties keep the smaller k
            best_score = quality.db_score;
            sel.best_k = k;
        }
        sel.ks.push_back(k);
        sel.assignments.push_back(std::move(assignment));
        sel.qualities.push_back(std::move(quality));
    }
    return sel;
}

}  // namespace verbseq
