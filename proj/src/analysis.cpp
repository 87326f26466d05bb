#include "verbseq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "verbseq/errors.hpp"

namespace verbseq {

UnitClusterMap label_units(int unit_count,
                           const std::vector<int>& clustered_units,
                           const ClusterAssignment& assignment) {
    if (clustered_units.size() != assignment.labels.size()) {
        throw DimensionMismatchError(
            "label_units: clustered unit list does not match assignment");
    }
    UnitClusterMap units;
    units.k = assignment.k;
    units.cluster_of_unit.assign(unit_count, kNoCluster);
    for (std::size_t i = 0; i < clustered_units.size(); ++i) {
        int u = clustered_units[i];
        if (u < 0 || u >= unit_count) {
            throw IndexOutOfRangeError("label_units: unit id out of range");
        }
        units.cluster_of_unit[u] = assignment.labels[i];
    }
    return units;
}

std::vector<LabeledTransition> assign_transitions(const Corpus& corpus,
                                                  const SomMap& map,
                                                  const UnitClusterMap& units) {
    std::vector<LabeledTransition> out;
    for (const auto& seq : extract_sequences(corpus).sequences) {
        for (const auto& window : window_transitions(seq, 1)) {
            std::vector<double> v(window.vector.begin(), window.vector.end());
            LabeledTransition t;
            t.unit = best_matching_unit(map, v).first;
            t.cluster = units.cluster_of_unit[t.unit];
            t.first = seq.tokens[window.window_start_pos];
            t.second = seq.tokens[window.window_start_pos + 1];
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<Span> segment_text(const Text& text,
                               const std::vector<LabeledTransition>& transitions) {
    std::vector<Span> spans;
    if (text.sentences.empty()) return spans;

    // windows of this text, grouped per sentence, in pos order
    std::map<int, std::vector<std::pair<int, int>>> windows;  // sent -> (pos, cluster)
    for (const auto& t : transitions) {
        if (t.text_id() != text.text_id) continue;
        windows[t.sent_id()].push_back({t.window_start_pos(), t.cluster});
    }
    for (auto& [sent, w] : windows) std::sort(w.begin(), w.end());

    int running = kNoCluster;
    for (const auto& sent : text.sentences) {
        int dominant;
        auto it = windows.find(sent.sent_id);
        if (it == windows.end() || it->second.empty()) {
            dominant = running;  // no windows: inherit
        } else {
            std::map<int, int> votes;
            for (const auto& [pos, cluster] : it->second) ++votes[cluster];
            int best_count = 0;
            for (const auto& [cluster, count] : votes) {
                best_count = std::max(best_count, count);
            }
            dominant = kNoCluster;
            for (const auto& [pos, cluster] : it->second) {
                if (votes[cluster] == best_count) {  // earliest tied window wins
                    dominant = cluster;
                    break;
                }
            }
        }
        if (!spans.empty() && spans.back().cluster == dominant) {
            spans.back().last_sent_id = sent.sent_id;
        } else {
            spans.push_back(Span{sent.sent_id, sent.sent_id, dominant});
        }
        running = dominant;
    }
    return spans;
}

namespace {

struct KeyColumns {
    std::vector<std::string> labels;
    // column index of a token under this key
    int (*index_of)(const VerbToken&);
};

int part_index(const VerbToken& t) { return static_cast<int>(t.part) - 1; }
int ground_index(const VerbToken& t) { return static_cast<int>(t.ground); }
int agent_index(const VerbToken& t) { return static_cast<int>(t.agent); }
int causal_index(const VerbToken& t) { return t.causal ? 1 : 0; }
int impact_index(const VerbToken& t) { return t.impact ? 1 : 0; }
int negation_index(const VerbToken& t) { return t.negation ? 1 : 0; }
int inertia_index(const VerbToken& t) { return t.inertia ? 1 : 0; }
int category_index(const VerbToken& t) { return static_cast<int>(t.category); }
int tense_index(const VerbToken& t) { return static_cast<int>(t.tense); }

KeyColumns key_columns(CrosstabKey key) {
    switch (key) {
        case CrosstabKey::part:
            return {{"1", "2", "3"}, part_index};
        case CrosstabKey::ground:
            return {{"fore", "back", "none"}, ground_index};
        case CrosstabKey::agent:
            return {{"A", "B", "C", "none"}, agent_index};
        case CrosstabKey::causal:
            return {{"0", "1"}, causal_index};
        case CrosstabKey::impact:
            return {{"0", "1"}, impact_index};
        case CrosstabKey::negation:
            return {{"0", "1"}, negation_index};
        case CrosstabKey::inertia:
            return {{"0", "1"}, inertia_index};
        case CrosstabKey::category:
            return {{"sta", "act", "acc", "ach"}, category_index};
        case CrosstabKey::tense:
            return {{"IM", "PR", "PC", "PS", "PQP", "inf", "ppr", "pp", "pps"},
                    tense_index};
        case CrosstabKey::position_in_pair:
            return {{"first", "second"}, nullptr};
    }
    throw ValueError("unknown crosstab key");
}

std::string cluster_label(int cluster) {
    return cluster == kNoCluster ? "none" : "c" + std::to_string(cluster);
}

}  // namespace

const char* to_string(CrosstabKey key) {
    switch (key) {
        case CrosstabKey::part: return "part";
        case CrosstabKey::ground: return "ground";
        case CrosstabKey::agent: return "agent";
        case CrosstabKey::causal: return "causal";
        case CrosstabKey::impact: return "impact";
        case CrosstabKey::negation: return "negation";
        case CrosstabKey::inertia: return "inertia";
        case CrosstabKey::category: return "category";
        case CrosstabKey::tense: return "tense";
        case CrosstabKey::position_in_pair: return "position";
    }
    return "?";
}

ContingencyTable crosstab(const std::vector<LabeledTransition>& transitions,
                          CrosstabKey key, PairPosition position) {
    if (transitions.empty()) throw EmptyInputError("crosstab: no transitions");

    KeyColumns columns = key_columns(key);
    const int ncols = static_cast<int>(columns.labels.size());

    // rows: clusters in ascending order, `none` last
    std::vector<int> clusters;
    for (const auto& t : transitions) {
        if (t.cluster != kNoCluster &&
            std::find(clusters.begin(), clusters.end(), t.cluster) == clusters.end()) {
            clusters.push_back(t.cluster);
        }
    }
    std::sort(clusters.begin(), clusters.end());
    bool has_none = std::any_of(transitions.begin(), transitions.end(),
                                [](const auto& t) { return t.cluster == kNoCluster; });
    if (has_none) clusters.push_back(kNoCluster);

    std::map<int, int> row_of;
    for (std::size_t r = 0; r < clusters.size(); ++r) row_of[clusters[r]] = int(r);

    ContingencyTable table;
    table.key = to_string(key);
    table.row_clusters = clusters;
    for (int c : clusters) table.row_labels.push_back(cluster_label(c));
    table.col_labels = columns.labels;
    table.counts.assign(clusters.size(), std::vector<std::size_t>(ncols, 0));
    table.row_verb_totals.assign(clusters.size(), 0);
    table.row_pair_totals.assign(clusters.size(), 0);

    for (const auto& t : transitions) {
        int r = row_of[t.cluster];
        ++table.row_pair_totals[r];
        if (key == CrosstabKey::position_in_pair) {
            ++table.counts[r][0];
            ++table.counts[r][1];
            table.row_verb_totals[r] += 2;
            continue;
        }
        if (position != PairPosition::second) {
            ++table.counts[r][columns.index_of(t.first)];
            ++table.row_verb_totals[r];
        }
        if (position != PairPosition::first) {
            ++table.counts[r][columns.index_of(t.second)];
            ++table.row_verb_totals[r];
        }
    }

    table.row_percent.assign(clusters.size(), std::vector<double>(ncols, 0.0));
    for (std::size_t r = 0; r < clusters.size(); ++r) {
        if (table.row_verb_totals[r] == 0) continue;
        for (int c = 0; c < ncols; ++c) {
            table.row_percent[r][c] = 100.0 * double(table.counts[r][c]) /
                                      double(table.row_verb_totals[r]);
        }
    }
    return table;
}

namespace {

// Regularized lower incomplete gamma by series expansion (x < a + 1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by continued fraction (x >= a + 1).
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw ValueError("gamma_q: domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

ChiSquareResult association_test(const ContingencyTable& table) {
    // keep non-zero rows/columns
    std::vector<int> rows, cols;
    for (std::size_t r = 0; r < table.counts.size(); ++r) {
        std::size_t total = 0;
        for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
            total += table.counts[r][c];
        }
        if (total > 0) rows.push_back(int(r));
    }
    for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
        std::size_t total = 0;
        for (std::size_t r = 0; r < table.counts.size(); ++r) {
            total += table.counts[r][c];
        }
        if (total > 0) cols.push_back(int(c));
    }

    ChiSquareResult result;
    for (std::size_t r = 0; r < table.counts.size(); ++r) {
        if (std::find(rows.begin(), rows.end(), int(r)) == rows.end()) {
            result.dropped_rows.push_back(table.row_labels[r]);
        }
    }
    for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
        if (std::find(cols.begin(), cols.end(), int(c)) == cols.end()) {
            result.dropped_cols.push_back(table.col_labels[c]);
        }
    }

    if (rows.size() < 2 || cols.size() < 2) {
        throw DegenerateTableError(
            "association_test: fewer than 2 non-zero rows or columns");
    }

    std::vector<double> row_totals(rows.size(), 0.0);
    std::vector<double> col_totals(cols.size(), 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double o = double(table.counts[rows[i]][cols[j]]);
            row_totals[i] += o;
            col_totals[j] += o;
            grand += o;
        }
    }

    double stat = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double expected = row_totals[i] * col_totals[j] / grand;
            double o = double(table.counts[rows[i]][cols[j]]);
            stat += (o - expected) * (o - expected) / expected;
            if (expected < 5.0) {
                result.warnings.push_back(
                    "expected count " + std::to_string(expected) + " < 5 in cell (" +
                    table.row_labels[rows[i]] + ", " + table.col_labels[cols[j]] + ")");
            }
        }
    }

    result.statistic = stat;
    result.df = int(rows.size() - 1) * int(cols.size() - 1);
    result.p_value = gamma_q(result.df / 2.0, stat / 2.0);
    return result;
}

std::vector<TypicalPair> typical_pairs(
    const SomMap& map, const UnitClusterMap& units,
    const std::vector<std::size_t>& hits,
    const std::vector<std::vector<double>>& empirical_matrix,
    std::size_t min_support, std::size_t top_n) {
    const int unit_count = map.unit_count();

    std::map<int, std::size_t> cluster_hits;
    for (int u = 0; u < unit_count; ++u) {
        int c = units.cluster_of_unit[u];
        if (c != kNoCluster) cluster_hits[c] += hits[u];
    }

    std::map<int, std::vector<TypicalPair>> by_cluster;
    for (int u = 0; u < unit_count; ++u) {
        int c = units.cluster_of_unit[u];
        if (c == kNoCluster) continue;
        if (hits[u] < min_support || hits[u] == 0) continue;

        TypicalPair pair;
        pair.cluster = c;
        pair.unit = u;
        auto decoded = decode_prototype(map, u);
        std::tie(pair.first_category, pair.first_tense) = decoded.first_argmax();
        std::tie(pair.second_category, pair.second_tense) = decoded.second_argmax();
        pair.support = hits[u];

        double best = 0.0;
        for (int v = 0; v < unit_count; ++v) {
            best = std::max(best, empirical_matrix[u][v]);  // outgoing
            best = std::max(best, empirical_matrix[v][u]);  // incoming
        }
        pair.transition_prob = best;

        double share = cluster_hits[c] > 0
                           ? double(hits[u]) / double(cluster_hits[c])
                           : 0.0;
        pair.score = share * (1.0 + best);
        by_cluster[c].push_back(pair);
    }

    std::vector<TypicalPair> out;
    for (auto& [cluster, pairs] : by_cluster) {
        std::sort(pairs.begin(), pairs.end(),
                  [](const TypicalPair& a, const TypicalPair& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.unit < b.unit;
                  });
        if (pairs.size() > top_n) pairs.resize(top_n);
        out.insert(out.end(), pairs.begin(), pairs.end());
    }
    return out;
}

}  // namespace verbseq
