#ifndef VERBSEQ_MARKOV_HPP
#define VERBSEQ_MARKOV_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "verbseq/corpus.hpp"
#include "verbseq/som.hpp"

namespace verbseq {

// A sentence's windows mapped to SOM codebook indices.
struct SymbolSequence {
    std::vector<int> symbols;  // each in [0, M)
    std::string text_id;
    int sent_id = 0;
};

// Discrete-emission hidden Markov model over the codebook alphabet.
struct HmmModel {
    int num_states = 0;    // K
    int alphabet_size = 0; // M
    std::vector<double> initial;                 // K, sums to 1
    std::vector<std::vector<double>> transition; // K x K, row-stochastic
    std::vector<std::vector<double>> emission;   // K x M, row-stochastic
};

struct BaumWelchResult {
    HmmModel model;
    std::vector<double> loglik_trace;  // total log-likelihood per iteration
    std::uint64_t seed = 0;
};

// P[i][j] = (count(i->j) + alpha) / (count(i->.) + alpha*M). A row with no
// outgoing counts and alpha = 0 falls back to uniform.
std::vector<std::vector<double>> empirical_transitions(
    const std::vector<SymbolSequence>& sequences, int alphabet_size,
    double alpha);

// EM from a seeded random stochastic start; stops when the log-likelihood
// improves by less than tol, or after max_iter iterations. Scaled
// forward-backward, so long sequences do not underflow.
BaumWelchResult baum_welch(const std::vector<SymbolSequence>& sequences,
                           int num_states, int alphabet_size,
                           std::uint64_t seed, int max_iter = 200,
                           double tol = 1e-6);

// log P(sequence | model); -inf when the sequence is impossible.
double forward_log_likelihood(const HmmModel& model,
                              const SymbolSequence& sequence);

struct ViterbiResult {
    std::vector<int> states;
    double log_prob = 0.0;  // <= forward log-likelihood
};

// Most probable state path in log space; ties break toward lower state index.
ViterbiResult viterbi(const HmmModel& model, const SymbolSequence& sequence);

// Bridge from the SOM layer: each verb sequence becomes the BMU indices of
// its stride-1 transition windows (length = verbs - 1).
std::vector<SymbolSequence> bmu_sequences(
    const std::vector<VerbSequence>& sequences, const SomMap& map);

}  // namespace verbseq

#endif
