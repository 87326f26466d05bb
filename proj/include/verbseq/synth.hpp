#ifndef VERBSEQ_SYNTH_HPP
#define VERBSEQ_SYNTH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "verbseq/corpus.hpp"

namespace verbseq {

// 36 joint (category, tense) cells; index = category*9 + tense.
inline constexpr int kNumPairs = kNumCategories * kNumTenses;

inline int pair_index(Category c, Tense t) {
    return static_cast<int>(c) * kNumTenses + static_cast<int>(t);
}

// Per-verb annotation distributions of one regime.
struct AnnotationModel {
    std::array<double, 3> part{};    // P(part = 1, 2, 3)
    std::array<double, 3> ground{};  // fore, back, none
    std::array<double, 4> agent{};   // A, B, C, none
    double causal = 0.0;
    double impact = 0.0;
    double negation = 0.0;
    double inertia = 0.0;
};

// One transition regime: first-verb distribution, first-order conditional
// for each following verb, and annotation tendencies.
struct Regime {
    std::string name;
    std::array<double, kNumPairs> first{};
    std::array<std::array<double, kNumPairs>, kNumPairs> next{};
    AnnotationModel annotations;
};

// Regime indices within a generated text. Part 1 is circumstance
// sentences; part 2 is maneuver sentences closed by impact sentences;
// part 3 (optional) is comment sentences.
inline constexpr int kRegimeCircumstance = 0;
inline constexpr int kRegimeManeuver = 1;
inline constexpr int kRegimeImpact = 2;
inline constexpr int kRegimeComment = 3;
inline constexpr int kNumRegimes = 4;

// Narrative part annotation value of each regime's sentences.
inline constexpr int kPartOfRegime[kNumRegimes] = {1, 2, 2, 3};

// Generator specification: regimes, per-regime sentence-count
// distributions, and the peakedness parameter delta. Sampling
// distributions are delta * pattern + (1 - delta) * uniform.
struct RegimeSpec {
    std::array<Regime, kNumRegimes> regimes;
    // pmf[i] = P(count == i); no mass at 0 (every part is non-empty when
    // present; part 3 presence is governed by part3_prob)
    std::array<std::vector<double>, kNumRegimes> sentences_per_regime;
    double part3_prob = 0.5;
    std::array<std::vector<double>, kNumRegimes> verbs_per_sentence;
    double delta = 0.85;
};

// Throws InvalidSpecError when a distribution is unnormalized, a length pmf
// allows empty parts/sentences, or delta is outside [0, 1].
void validate_spec(const RegimeSpec& spec);

struct SentenceTruth {
    std::string text_id;
    int sent_id = 0;
    int part = 0;    // 1, 2, 3
    int regime = 0;  // 0..3
};

struct WindowTruth {
    std::string text_id;
    int sent_id = 0;
    int window_start_pos = 0;
    int regime = 0;
};

struct GroundTruth {
    std::vector<SentenceTruth> sentences;
    std::vector<WindowTruth> windows;
};

struct SynthResult {
    Corpus corpus;
    GroundTruth truth;
};

// Deterministic generation: text i draws from a substream of (seed, i).
SynthResult generate_corpus(const RegimeSpec& spec, int n_texts,
                            std::uint64_t seed);

// Sidecar format: text_id,sent_id,window_start_pos,true_regime
void save_ground_truth(const GroundTruth& truth, const std::string& path);
GroundTruth load_ground_truth(const std::string& path);

// Spec whose implied marginals approximate the reference corpus profile
// (state 24, activity 10, accomplishment 34, achievement 32; imparfait 24,
// passe compose 34, infinitives ~20, present participles ~11).
RegimeSpec default_paper_spec();

struct ImpliedMarginals {
    std::array<double, kNumCategories> category{};
    std::array<double, kNumTenses> tense{};
};

// Exact expected verb-level marginals of a spec (chain composition over
// sentence-length distributions).
ImpliedMarginals implied_marginals(const RegimeSpec& spec);

}  // namespace verbseq

#endif
