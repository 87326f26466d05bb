#ifndef VERBSEQ_ANALYSIS_HPP
#define VERBSEQ_ANALYSIS_HPP

#include <string>
#include <vector>

#include "verbseq/clusterer.hpp"
#include "verbseq/corpus.hpp"
#include "verbseq/som.hpp"

namespace verbseq {

// Cluster id of windows whose BMU was never clustered (empty unit).
inline constexpr int kNoCluster = -1;

// Cluster label for every map unit; kNoCluster marks units that were
// excluded from clustering.
struct UnitClusterMap {
    int k = 0;
    std::vector<int> cluster_of_unit;
};

// Expands a clustering over a subset of units (by unit id) to the full map.
UnitClusterMap label_units(int unit_count,
                           const std::vector<int>& clustered_units,
                           const ClusterAssignment& assignment);

// A corpus window with its codebook unit and cluster.
struct LabeledTransition {
    VerbToken first;
    VerbToken second;
    int unit = 0;
    int cluster = kNoCluster;

    const std::string& text_id() const { return first.text_id; }
    int sent_id() const { return first.sent_id; }
    int window_start_pos() const { return first.pos; }
};

// Labels every window of every sequence in the corpus.
std::vector<LabeledTransition> assign_transitions(const Corpus& corpus,
                                                  const SomMap& map,
                                                  const UnitClusterMap& units);

// Maximal run of adjacent sentences sharing a dominant cluster.
struct Span {
    int first_sent_id = 0;
    int last_sent_id = 0;
    int cluster = kNoCluster;
};

// Dominant cluster per sentence (majority over its windows, ties to the
// earliest window's cluster), merged over adjacent sentences. Sentences
// without windows inherit the running cluster.
std::vector<Span> segment_text(const Text& text,
                               const std::vector<LabeledTransition>& transitions);

enum class CrosstabKey {
    part,
    ground,
    agent,
    causal,
    impact,
    negation,
    inertia,
    category,
    tense,
    position_in_pair,
};

enum class PairPosition { both, first, second };

const char* to_string(CrosstabKey key);

// Clusters x annotation values, counted over verb occurrences (each window
// contributes its two verbs, or one of them under a position filter).
struct ContingencyTable {
    std::string key;
    std::vector<int> row_clusters;  // kNoCluster row labeled "none"
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::vector<double>> row_percent;   // rows sum to 100
    std::vector<std::size_t> row_verb_totals;
    std::vector<std::size_t> row_pair_totals;       // windows per cluster
};

ContingencyTable crosstab(const std::vector<LabeledTransition>& transitions,
                          CrosstabKey key,
                          PairPosition position = PairPosition::both);

// Pearson chi-square over the table's counts. Zero rows/columns are dropped
// (and listed); cells with expected count < 5 produce a warning.
struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    std::vector<std::string> dropped_rows;
    std::vector<std::string> dropped_cols;
    std::vector<std::string> warnings;
};

ChiSquareResult association_test(const ContingencyTable& table);

// Regularized upper incomplete gamma Q(a, x); chi-square tail helper.
double gamma_q(double a, double x);

// Decoded representative transition pattern of one map unit.
struct TypicalPair {
    int cluster = 0;
    int unit = 0;
    Category first_category = Category::sta;
    Tense first_tense = Tense::IM;
    Category second_category = Category::sta;
    Tense second_tense = Tense::IM;
    std::size_t support = 0;       // BMU hits of the unit
    double transition_prob = 0.0;  // best in/out chain probability
    double score = 0.0;
};

// Ranks each cluster's units by hit share times (1 + best chain
// probability); keeps pairs with support >= min_support, top_n per cluster.
// Output ordered by (cluster, rank); ties break by unit index.
std::vector<TypicalPair> typical_pairs(
    const SomMap& map, const UnitClusterMap& units,
    const std::vector<std::size_t>& hits,
    const std::vector<std::vector<double>>& empirical_matrix,
    std::size_t min_support, std::size_t top_n);

}  // namespace verbseq

#endif
