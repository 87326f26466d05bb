#ifndef VERBSEQ_PIPELINE_HPP
#define VERBSEQ_PIPELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "verbseq/analysis.hpp"
#include "verbseq/persist.hpp"

namespace verbseq {

// Everything a run needs; persisted verbatim into the output directory so
// any run can be reproduced from its artifacts alone.
struct RunConfig {
    std::string corpus_path;
    std::string out_dir;
    std::uint64_t seed = 1;

    int som_rows = 8;
    int som_cols = 8;
    int som_epochs = 50;
    double som_initial_radius = 4.0;
    double som_final_radius = 0.5;
    int replication = 1;

    int k_fixed = 0;  // 0 selects k by Davies-Bouldin over [k_min, k_max]
    int k_min = 2;
    int k_max = 8;

    int hmm_states = 0;  // 0 uses the clustering's k
    double hmm_alpha = 1.0;
    int hmm_max_iter = 200;
    double hmm_tol = 1e-6;

    std::size_t min_support = 1;
    std::size_t top_n = 3;
};

// key=value text format, '#' comments; unknown keys are errors.
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

struct TrainArtifacts {
    SomMap som;
    ClusteringArtifact clustering;
    BaumWelchResult hmm;
    EmpiricalMatrixArtifact empirical;
};

// encode -> window -> SOM -> cluster -> BMU sequences -> empirical matrix
// + Baum-Welch; persists som.json, clustering.json, hmm.json,
// transitions.json and config.txt under config.out_dir.
TrainArtifacts run_train(const RunConfig& config);

TrainArtifacts load_artifacts(const std::string& dir);

// Crosstabs, association tests, typical pairs and segmentations for a
// corpus under a trained model. Text tables go to `text_out`; CSV/JSON
// files are written under out_dir when it is non-empty.
void run_report(const TrainArtifacts& artifacts, const Corpus& corpus,
                const std::string& out_dir, std::ostream& text_out,
                std::size_t min_support, std::size_t top_n);

// Per-text segmentation JSON (the `segment` subcommand).
void write_segments(const TrainArtifacts& artifacts, const Corpus& corpus,
                    std::ostream& out);

// Distribution tables in the fixed stats format (golden-file stable).
void print_stats(const Corpus& corpus, std::ostream& out);

}  // namespace verbseq

#endif
