#include "verbseq/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "verbseq/errors.hpp"
#include "verbseq/rng.hpp"

namespace verbseq {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
    std::istringstream ss(value);
    T out;
    ss >> out;
    if (ss.fail() || !ss.eof()) {
        throw ValueError("config: bad value '" + value + "' for key '" + key + "'");
    }
    return out;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(line_no) +
                              ": expected key=value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key == "corpus") config.corpus_path = value;
        else if (key == "out") config.out_dir = value;
        else if (key == "seed") config.seed = parse_number<std::uint64_t>(value, key);
        else if (key == "som_rows") config.som_rows = parse_number<int>(value, key);
        else if (key == "som_cols") config.som_cols = parse_number<int>(value, key);
        else if (key == "som_epochs") config.som_epochs = parse_number<int>(value, key);
        else if (key == "som_initial_radius")
            config.som_initial_radius = parse_number<double>(value, key);
        else if (key == "som_final_radius")
            config.som_final_radius = parse_number<double>(value, key);
        else if (key == "replication")
            config.replication = parse_number<int>(value, key);
        else if (key == "k_fixed") config.k_fixed = parse_number<int>(value, key);
        else if (key == "k_min") config.k_min = parse_number<int>(value, key);
        else if (key == "k_max") config.k_max = parse_number<int>(value, key);
        else if (key == "hmm_states")
            config.hmm_states = parse_number<int>(value, key);
        else if (key == "hmm_alpha")
            config.hmm_alpha = parse_number<double>(value, key);
        else if (key == "hmm_max_iter")
            config.hmm_max_iter = parse_number<int>(value, key);
        else if (key == "hmm_tol") config.hmm_tol = parse_number<double>(value, key);
        else if (key == "min_support")
            config.min_support = parse_number<std::size_t>(value, key);
        else if (key == "top_n") config.top_n = parse_number<std::size_t>(value, key);
        else {
            throw ValueError("config line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
        }
    }
    return config;
}

void save_run_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write config file '" + path + "'");
    out << "# pipeline run configuration\n";
    out << "corpus=" << config.corpus_path << '\n';
    out << "out=" << config.out_dir << '\n';
    out << "seed=" << config.seed << '\n';
    out << "som_rows=" << config.som_rows << '\n';
    out << "som_cols=" << config.som_cols << '\n';
    out << "som_epochs=" << config.som_epochs << '\n';
    out << "som_initial_radius=" << format_double(config.som_initial_radius) << '\n';
    out << "som_final_radius=" << format_double(config.som_final_radius) << '\n';
    out << "replication=" << config.replication << '\n';
    out << "k_fixed=" << config.k_fixed << '\n';
    out << "k_min=" << config.k_min << '\n';
    out << "k_max=" << config.k_max << '\n';
    out << "hmm_states=" << config.hmm_states << '\n';
    out << "hmm_alpha=" << format_double(config.hmm_alpha) << '\n';
    out << "hmm_max_iter=" << config.hmm_max_iter << '\n';
    out << "hmm_tol=" << format_double(config.hmm_tol) << '\n';
    out << "min_support=" << config.min_support << '\n';
    out << "top_n=" << config.top_n << '\n';
}

TrainArtifacts run_train(const RunConfig& config) {
    Corpus corpus = load_corpus(config.corpus_path);
    auto extraction = extract_sequences(corpus);
    if (extraction.sequences.empty()) {
        throw EmptyCorpusError("no sequences of length >= 2 in corpus");
    }

    std::vector<TransitionSample> samples;
    for (const auto& seq : extraction.sequences) {
        auto windows = window_transitions(seq, config.replication);
        samples.insert(samples.end(), windows.begin(), windows.end());
    }
    auto vectors = sample_vectors(samples);

    SomConfig som_config;
    som_config.rows = config.som_rows;
    som_config.cols = config.som_cols;
    som_config.epochs = config.som_epochs;
    som_config.initial_radius = config.som_initial_radius;
    som_config.final_radius = config.som_final_radius;
    som_config.seed = substream(config.seed, "som");

    TrainArtifacts artifacts;
    artifacts.som = train_som(vectors, som_config);

    auto hits = hit_histogram(artifacts.som, vectors);
    std::vector<int> labeled_units;
    std::vector<std::vector<double>> labeled_prototypes;
    for (int u = 0; u < artifacts.som.unit_count(); ++u) {
        if (hits[u] > 0) {
            labeled_units.push_back(u);
            labeled_prototypes.push_back(artifacts.som.prototypes[u]);
        }
    }

    const int n_labeled = static_cast<int>(labeled_units.size());
    ClusterAssignment assignment;
    ClusteringArtifact& clustering = artifacts.clustering;
    if (config.k_fixed > 0) {
        auto distances = distance_matrix(labeled_prototypes);
        assignment = cluster_prototypes(distances, config.k_fixed);
        auto quality = davies_bouldin(labeled_prototypes, assignment);
        clustering.db_score = quality.db_score;
        clustering.per_k_scores = {{config.k_fixed, quality.db_score}};
    } else {
        int k_max = std::min(config.k_max, n_labeled - 1);
        if (k_max < config.k_min) {
            throw InvalidKError("too few populated units (" +
                                std::to_string(n_labeled) + ") for k selection");
        }
        auto selection = select_k(labeled_prototypes, config.k_min, k_max);
        for (std::size_t i = 0; i < selection.ks.size(); ++i) {
            clustering.per_k_scores.emplace_back(selection.ks[i],
                                                 selection.qualities[i].db_score);
            if (selection.ks[i] == selection.best_k) {
                assignment = selection.assignments[i];
                clustering.db_score = selection.qualities[i].db_score;
            }
        }
    }
    clustering.k = assignment.k;
    clustering.units = labeled_units;
    clustering.labels = assignment.labels;
    for (int m : assignment.medoids) clustering.medoids.push_back(labeled_units[m]);

    auto symbol_sequences = bmu_sequences(extraction.sequences, artifacts.som);
    const int alphabet = artifacts.som.unit_count();
    artifacts.empirical.alphabet_size = alphabet;
    artifacts.empirical.alpha = config.hmm_alpha;
    artifacts.empirical.matrix =
        empirical_transitions(symbol_sequences, alphabet, config.hmm_alpha);

    int hmm_states = config.hmm_states > 0 ? config.hmm_states : clustering.k;
    artifacts.hmm =
        baum_welch(symbol_sequences, hmm_states, alphabet,
                   substream(config.seed, "hmm-init"), config.hmm_max_iter,
                   config.hmm_tol);

    if (!config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        fs::path dir(config.out_dir);
        save_som(artifacts.som, (dir / "som.json").string());
        save_clustering(clustering, (dir / "clustering.json").string());
        save_hmm(artifacts.hmm, (dir / "hmm.json").string());
        save_empirical(artifacts.empirical, (dir / "transitions.json").string());
        save_run_config(config, (dir / "config.txt").string());
    }
    return artifacts;
}

TrainArtifacts load_artifacts(const std::string& dir) {
    fs::path p(dir);
    TrainArtifacts artifacts;
    artifacts.som = load_som((p / "som.json").string());
    artifacts.clustering = load_clustering((p / "clustering.json").string());
    artifacts.hmm = load_hmm((p / "hmm.json").string());
    artifacts.empirical = load_empirical((p / "transitions.json").string());
    return artifacts;
}

namespace {

UnitClusterMap unit_cluster_map(const TrainArtifacts& artifacts) {
    ClusterAssignment assignment;
    assignment.k = artifacts.clustering.k;
    assignment.labels = artifacts.clustering.labels;
    return label_units(artifacts.som.unit_count(), artifacts.clustering.units,
                       assignment);
}

void print_crosstab(const ContingencyTable& table, const char* title,
                    std::ostream& out) {
    char buf[64];
    out << "crosstab: " << title << "\n";
    std::snprintf(buf, sizeof(buf), "%-8s", "cluster");
    out << buf;
    for (const auto& col : table.col_labels) {
        std::snprintf(buf, sizeof(buf), " %7s", col.c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), " %7s %7s", "verbs", "pairs");
    out << buf << '\n';
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%-8s", table.row_labels[r].c_str());
        out << buf;
        for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
            std::snprintf(buf, sizeof(buf), " %7.2f", table.row_percent[r][c]);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), " %7zu %7zu", table.row_verb_totals[r],
                      table.row_pair_totals[r]);
        out << buf << '\n';
    }
}

void write_crosstab_csv(const ContingencyTable& table, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "cluster,value,count,row_pct,row_verb_total,row_pair_total\n";
    char buf[32];
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.4f", table.row_percent[r][c]);
            out << table.row_labels[r] << ',' << table.col_labels[c] << ','
                << table.counts[r][c] << ',' << buf << ','
                << table.row_verb_totals[r] << ',' << table.row_pair_totals[r]
                << '\n';
        }
    }
}

std::string cluster_name(int cluster) {
    return cluster == kNoCluster ? "none" : "c" + std::to_string(cluster);
}

void write_segments_json(const Corpus& corpus,
                         const std::vector<LabeledTransition>& transitions,
                         std::ostream& out) {
    out << "[\n";
    for (std::size_t i = 0; i < corpus.texts.size(); ++i) {
        const Text& text = corpus.texts[i];
        auto spans = segment_text(text, transitions);
        out << "  {\"text_id\": \"" << text.text_id << "\", \"spans\": [";
        for (std::size_t s = 0; s < spans.size(); ++s) {
            if (s > 0) out << ", ";
            out << "{\"first_sent\": " << spans[s].first_sent_id
                << ", \"last_sent\": " << spans[s].last_sent_id << ", \"cluster\": \""
                << cluster_name(spans[s].cluster) << "\"}";
        }
        out << "]}" << (i + 1 < corpus.texts.size() ? "," : "") << '\n';
    }
    out << "]\n";
}

void write_typical_pairs_json(const std::vector<TypicalPair>& pairs,
                              std::ostream& out) {
    out << "[\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const TypicalPair& p = pairs[i];
        out << "  {\"cluster\": \"" << cluster_name(p.cluster)
            << "\", \"unit\": " << p.unit << ", \"first\": {\"category\": \""
            << to_string(p.first_category) << "\", \"tense\": \""
            << to_string(p.first_tense) << "\"}, \"second\": {\"category\": \""
            << to_string(p.second_category) << "\", \"tense\": \""
            << to_string(p.second_tense) << "\"}, \"support\": " << p.support
            << ", \"transition_prob\": " << format_double(p.transition_prob)
            << ", \"score\": " << format_double(p.score) << "}"
            << (i + 1 < pairs.size() ? "," : "") << '\n';
    }
    out << "]\n";
}

}  // namespace

void run_report(const TrainArtifacts& artifacts, const Corpus& corpus,
                const std::string& out_dir, std::ostream& text_out,
                std::size_t min_support, std::size_t top_n) {
    UnitClusterMap units = unit_cluster_map(artifacts);
    auto transitions = assign_transitions(corpus, artifacts.som, units);
    if (transitions.empty()) {
        throw EmptyCorpusError("report: corpus produced no transitions");
    }

    std::size_t unlabeled = 0;
    for (const auto& t : transitions) {
        if (t.cluster == kNoCluster) ++unlabeled;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "windows: %zu, on unlabeled units: %zu (%.2f%%)\n",
                  transitions.size(), unlabeled,
                  100.0 * double(unlabeled) / double(transitions.size()));
    text_out << buf;

    const bool write_files = !out_dir.empty();
    fs::path dir(out_dir);
    if (write_files) fs::create_directories(dir);

    struct TableSpec {
        CrosstabKey key;
        PairPosition position;
        const char* name;
        const char* title;
    };
    const TableSpec specs[] = {
        {CrosstabKey::part, PairPosition::both, "part", "part (both verbs)"},
        {CrosstabKey::ground, PairPosition::both, "ground", "ground (both verbs)"},
        {CrosstabKey::agent, PairPosition::both, "agent", "agent (both verbs)"},
        {CrosstabKey::causal, PairPosition::both, "causal", "causal (both verbs)"},
        {CrosstabKey::impact, PairPosition::both, "impact", "impact (both verbs)"},
        {CrosstabKey::negation, PairPosition::both, "negation",
         "negation (both verbs)"},
        {CrosstabKey::inertia, PairPosition::both, "inertia", "inertia (both verbs)"},
        {CrosstabKey::category, PairPosition::both, "category",
         "category (both verbs)"},
        {CrosstabKey::category, PairPosition::first, "category_first",
         "category (first verb)"},
        {CrosstabKey::category, PairPosition::second, "category_second",
         "category (second verb)"},
        {CrosstabKey::tense, PairPosition::both, "tense", "tense (both verbs)"},
        {CrosstabKey::tense, PairPosition::first, "tense_first",
         "tense (first verb)"},
        {CrosstabKey::tense, PairPosition::second, "tense_second",
         "tense (second verb)"},
        {CrosstabKey::position_in_pair, PairPosition::both, "position",
         "position in pair"},
    };

    std::ofstream association;
    if (write_files) {
        association.open(dir / "association.csv", std::ios::binary);
        association << "table,statistic,df,p_value,dropped,low_expected_cells\n";
    }

    for (const auto& spec : specs) {
        auto table = crosstab(transitions, spec.key, spec.position);
        text_out << '\n';
        print_crosstab(table, spec.title, text_out);
        if (write_files) {
            write_crosstab_csv(table,
                               dir / ("crosstab_" + std::string(spec.name) + ".csv"));
        }
        try {
            auto chi = association_test(table);
            std::snprintf(buf, sizeof(buf),
                          "chi-square: stat=%.6f df=%d p=%.6g%s\n", chi.statistic,
                          chi.df, chi.p_value,
                          chi.warnings.empty() ? "" : " (low expected counts)");
            text_out << buf;
            if (write_files) {
                std::snprintf(buf, sizeof(buf), "%.6f,%d,%.6g", chi.statistic,
                              chi.df, chi.p_value);
                association << spec.name << ',' << buf << ','
                            << (chi.dropped_rows.size() + chi.dropped_cols.size())
                            << ',' << chi.warnings.size() << '\n';
            }
        } catch (const DegenerateTableError&) {
            text_out << "chi-square: degenerate table, skipped\n";
            if (write_files) association << spec.name << ",,,,degenerate,\n";
        }
    }

    auto hits_per_unit = [&] {
        std::vector<std::size_t> hits(artifacts.som.unit_count(), 0);
        for (const auto& t : transitions) ++hits[t.unit];
        return hits;
    }();
    auto pairs = typical_pairs(artifacts.som, units, hits_per_unit,
                               artifacts.empirical.matrix, min_support, top_n);
    text_out << "\ntypical pairs\n";
    for (const auto& p : pairs) {
        std::snprintf(buf, sizeof(buf),
                      "%-5s unit %3d  (%s, %s) -> (%s, %s)  support=%zu chain=%.3f "
                      "score=%.4f\n",
                      cluster_name(p.cluster).c_str(), p.unit,
                      to_string(p.first_category), to_string(p.first_tense),
                      to_string(p.second_category), to_string(p.second_tense),
                      p.support, p.transition_prob, p.score);
        text_out << buf;
    }

    if (write_files) {
        std::ofstream seg(dir / "segments.json", std::ios::binary);
        write_segments_json(corpus, transitions, seg);
        std::ofstream tp(dir / "typical_pairs.json", std::ios::binary);
        write_typical_pairs_json(pairs, tp);
    }
}

void write_segments(const TrainArtifacts& artifacts, const Corpus& corpus,
                    std::ostream& out) {
    UnitClusterMap units = unit_cluster_map(artifacts);
    auto transitions = assign_transitions(corpus, artifacts.som, units);
    write_segments_json(corpus, transitions, out);
}

void print_stats(const Corpus& corpus, std::ostream& out) {
    auto tables = tabulate_distributions(corpus);
    char buf[160];

    out << "texts: " << corpus.texts.size() << '\n';
    out << "sentences: " << corpus.sentence_count() << '\n';
    out << "tokens: " << tables.total_tokens << "\n\n";

    std::snprintf(buf, sizeof(buf), "%-8s %6s %8s\n", "category", "count",
                  "percent");
    out << buf;
    for (int c = 0; c < kNumCategories; ++c) {
        std::snprintf(buf, sizeof(buf), "%-8s %6zu %8.2f\n",
                      to_string(static_cast<Category>(c)), tables.category_counts[c],
                      tables.category_percent[c]);
        out << buf;
    }
    out << '\n';

    std::snprintf(buf, sizeof(buf), "%-8s %6s %8s\n", "tense", "count", "percent");
    out << buf;
    for (int t = 0; t < kNumTenses; ++t) {
        std::snprintf(buf, sizeof(buf), "%-8s %6zu %8.2f\n",
                      to_string(static_cast<Tense>(t)), tables.tense_counts[t],
                      tables.tense_percent[t]);
        out << buf;
    }
    out << '\n';

    out << "tense by category (row %)\n";
    std::snprintf(buf, sizeof(buf), "%-8s", "category");
    out << buf;
    for (int t = 0; t < kNumTenses; ++t) {
        std::snprintf(buf, sizeof(buf), " %7s", to_string(static_cast<Tense>(t)));
        out << buf;
    }
    out << '\n';
    for (int c = 0; c < kNumCategories; ++c) {
        std::snprintf(buf, sizeof(buf), "%-8s", to_string(static_cast<Category>(c)));
        out << buf;
        for (int t = 0; t < kNumTenses; ++t) {
            std::snprintf(buf, sizeof(buf), " %7.2f", tables.tense_by_category[c][t]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace verbseq
