#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "verbseq/errors.hpp"
#include "verbseq/pipeline.hpp"
#include "verbseq/synth.hpp"

namespace fs = std::filesystem;
using namespace verbseq;

namespace {

// exit codes: 0 ok, 1 domain/validation error, 2 I/O error
int run_validate(const std::string& corpus_path) {
    try {
        Corpus corpus = load_corpus(corpus_path);
        std::cout << "ok: " << corpus.texts.size() << " texts, "
                  << corpus.sentence_count() << " sentences, "
                  << corpus.token_count() << " tokens\n";
        return 0;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "violation: " << e.what() << '\n';
        return 1;
    }
}

int run_stats(const std::string& corpus_path) {
    Corpus corpus = load_corpus(corpus_path);
    print_stats(corpus, std::cout);
    return 0;
}

int run_synth(const std::string& spec_path, bool paper_default, int n_texts,
              std::uint64_t seed, const std::string& out_dir) {
    RegimeSpec spec;
    if (paper_default) {
        spec = default_paper_spec();
    } else if (!spec_path.empty()) {
        spec = load_regime_spec(spec_path);
    } else {
        throw ValueError("synth: pass --paper-default or --spec PATH");
    }
    auto result = generate_corpus(spec, n_texts, seed);
    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    save_corpus(result.corpus, (dir / "corpus.csv").string());
    save_ground_truth(result.truth, (dir / "ground_truth.csv").string());
    save_regime_spec(spec, (dir / "spec.json").string());
    std::cout << "wrote " << result.corpus.texts.size() << " texts ("
              << result.corpus.token_count() << " tokens, "
              << result.truth.windows.size() << " windows) to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latent-structure toolkit for annotated verb sequences"};
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "parse and validate a corpus file");
    std::string validate_path;
    validate->add_option("corpus", validate_path, "corpus CSV path")->required();

    auto* stats = app.add_subcommand("stats", "print corpus distribution tables");
    std::string stats_path;
    stats->add_option("corpus", stats_path, "corpus CSV path")->required();

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synth_spec;
    bool synth_default = false;
    int synth_n = 100;
    std::uint64_t synth_seed = 1;
    std::string synth_out = "synth-out";
    synth->add_option("--spec", synth_spec, "regime spec JSON path");
    synth->add_flag("--paper-default", synth_default, "use the bundled default spec");
    synth->add_option("--n", synth_n, "number of texts");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output directory")->required();

    auto* train = app.add_subcommand("train", "train map, clustering and chain models");
    std::string train_config;
    RunConfig config;
    std::string train_corpus, train_out;
    std::uint64_t train_seed = 0;
    train->add_option("--config", train_config, "run config file (key=value)");
    train->add_option("--corpus", train_corpus, "corpus CSV path");
    train->add_option("--out", train_out, "artifact output directory");
    train->add_option("--seed", train_seed, "run seed");
    train->add_option("--som-rows", config.som_rows, "SOM grid rows");
    train->add_option("--som-cols", config.som_cols, "SOM grid cols");
    train->add_option("--som-epochs", config.som_epochs, "SOM training epochs");
    train->add_option("--som-initial-radius", config.som_initial_radius,
                      "neighborhood radius at epoch 0");
    train->add_option("--som-final-radius", config.som_final_radius,
                      "neighborhood radius at the last epoch");
    train->add_option("--replication", config.replication,
                      "window replication factor");
    train->add_option("--k", config.k_fixed, "fixed cluster count (0 = select)");
    train->add_option("--k-min", config.k_min, "smallest k to try");
    train->add_option("--k-max", config.k_max, "largest k to try");
    train->add_option("--hmm-states", config.hmm_states,
                      "HMM state count (0 = clustering's k)");
    train->add_option("--hmm-alpha", config.hmm_alpha, "Laplace smoothing");
    train->add_option("--hmm-max-iter", config.hmm_max_iter, "EM iteration cap");
    train->add_option("--hmm-tol", config.hmm_tol, "EM convergence tolerance");
    train->add_option("--min-support", config.min_support,
                      "typical-pair support floor");
    train->add_option("--top-n", config.top_n, "typical pairs per cluster");

    auto* report = app.add_subcommand("report", "crosstabs, tests and typical pairs");
    std::string report_artifacts, report_corpus, report_out;
    std::size_t report_min_support = 1, report_top_n = 3;
    report->add_option("--artifacts", report_artifacts, "train output directory")
        ->required();
    report->add_option("--corpus", report_corpus, "corpus CSV path")->required();
    report->add_option("--out", report_out, "report output directory");
    report->add_option("--min-support", report_min_support,
                       "typical-pair support floor");
    report->add_option("--top-n", report_top_n, "typical pairs per cluster");

    auto* segment = app.add_subcommand("segment", "per-text span segmentation");
    std::string segment_artifacts, segment_corpus;
    segment->add_option("--artifacts", segment_artifacts, "train output directory")
        ->required();
    segment->add_option("--corpus", segment_corpus, "corpus CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return run_validate(validate_path);
        if (*stats) return run_stats(stats_path);
        if (*synth) {
            return run_synth(synth_spec, synth_default, synth_n, synth_seed,
                             synth_out);
        }
        if (*train) {
            if (!train_config.empty()) {
                RunConfig flags = config;  // values from flags and defaults
                config = load_run_config(train_config);
                auto flag_wins = [&](const char* name, auto field) {
                    if (train->count(name) > 0) config.*field = flags.*field;
                };
                flag_wins("--som-rows", &RunConfig::som_rows);
                flag_wins("--som-cols", &RunConfig::som_cols);
                flag_wins("--som-epochs", &RunConfig::som_epochs);
                flag_wins("--som-initial-radius", &RunConfig::som_initial_radius);
                flag_wins("--som-final-radius", &RunConfig::som_final_radius);
                flag_wins("--replication", &RunConfig::replication);
                flag_wins("--k", &RunConfig::k_fixed);
                flag_wins("--k-min", &RunConfig::k_min);
                flag_wins("--k-max", &RunConfig::k_max);
                flag_wins("--hmm-states", &RunConfig::hmm_states);
                flag_wins("--hmm-alpha", &RunConfig::hmm_alpha);
                flag_wins("--hmm-max-iter", &RunConfig::hmm_max_iter);
                flag_wins("--hmm-tol", &RunConfig::hmm_tol);
                flag_wins("--min-support", &RunConfig::min_support);
                flag_wins("--top-n", &RunConfig::top_n);
            }
            if (train->count("--corpus")) config.corpus_path = train_corpus;
            if (train->count("--out")) config.out_dir = train_out;
            if (train->count("--seed")) config.seed = train_seed;
            if (config.corpus_path.empty()) {
                throw ValueError("train: no corpus given (flag or config)");
            }
            if (config.out_dir.empty()) {
                throw ValueError("train: no output directory given (flag or config)");
            }
            auto artifacts = run_train(config);
            std::cout << "trained: " << artifacts.som.rows << "x"
                      << artifacts.som.cols << " map, k=" << artifacts.clustering.k
                      << " (db=" << artifacts.clustering.db_score
                      << "), hmm states=" << artifacts.hmm.model.num_states << '\n';
            std::cout << "artifacts in " << config.out_dir << '\n';
            return 0;
        }
        if (*report) {
            auto artifacts = load_artifacts(report_artifacts);
            Corpus corpus = load_corpus(report_corpus);
            run_report(artifacts, corpus, report_out, std::cout, report_min_support,
                       report_top_n);
            return 0;
        }
        if (*segment) {
            auto artifacts = load_artifacts(segment_artifacts);
            Corpus corpus = load_corpus(segment_corpus);
            write_segments(artifacts, corpus, std::cout);
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
