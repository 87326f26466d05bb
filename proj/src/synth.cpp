#include "verbseq/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "verbseq/errors.hpp"
#include "verbseq/rng.hpp"

namespace verbseq {

namespace {

void check_pmf(const std::vector<double>& pmf, const std::string& what,
               bool forbid_zero_count) {
    if (pmf.empty()) throw InvalidSpecError(what + ": empty pmf");
    double sum = 0.0;
    for (double p : pmf) {
        if (p < 0.0) throw InvalidSpecError(what + ": negative probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw InvalidSpecError(what + ": pmf sums to " + std::to_string(sum));
    }
    if (forbid_zero_count && pmf[0] > 0.0) {
        throw InvalidSpecError(what + ": zero count must have probability 0");
    }
}

template <std::size_t N>
void check_distribution(const std::array<double, N>& d, const std::string& what) {
    double sum = 0.0;
    for (double p : d) {
        if (p < 0.0) throw InvalidSpecError(what + ": negative probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw InvalidSpecError(what + ": distribution sums to " + std::to_string(sum));
    }
}

void check_probability(double p, const std::string& what) {
    if (p < 0.0 || p > 1.0) {
        throw InvalidSpecError(what + ": probability " + std::to_string(p) +
                               " outside [0, 1]");
    }
}

template <std::size_t N>
std::size_t draw(std::mt19937_64& rng, const std::array<double, N>& dist) {
    double u = uniform_double(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        acc += dist[i];
        if (u < acc) return i;
    }
    return N - 1;
}

std::size_t draw_pmf(std::mt19937_64& rng, const std::vector<double>& pmf) {
    double u = uniform_double(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
        acc += pmf[i];
        if (u < acc) return i;
    }
    return pmf.size() - 1;
}

bool bernoulli(std::mt19937_64& rng, double p) { return uniform_double(rng) < p; }

std::array<double, kNumPairs> effective_dist(
    const std::array<double, kNumPairs>& pattern, double delta) {
    std::array<double, kNumPairs> out;
    const double leak = (1.0 - delta) / kNumPairs;
    for (int i = 0; i < kNumPairs; ++i) out[i] = delta * pattern[i] + leak;
    return out;
}

double expected_value(const std::vector<double>& pmf) {
    double e = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) e += double(i) * pmf[i];
    return e;
}

}  // namespace

void validate_spec(const RegimeSpec& spec) {
    if (spec.delta < 0.0 || spec.delta > 1.0) {
        throw InvalidSpecError("delta " + std::to_string(spec.delta) +
                               " outside [0, 1]");
    }
    check_probability(spec.part3_prob, "part3_prob");
    for (int r = 0; r < kNumRegimes; ++r) {
        check_pmf(spec.sentences_per_regime[r],
                  "sentences_per_regime[" + std::to_string(r) + "]", true);
    }
    for (int r = 0; r < kNumRegimes; ++r) {
        const Regime& regime = spec.regimes[r];
        const std::string tag = "regime " + regime.name;
        check_distribution(regime.first, tag + " first");
        for (int i = 0; i < kNumPairs; ++i) {
            check_distribution(regime.next[i], tag + " next[" + std::to_string(i) + "]");
        }
        check_distribution(regime.annotations.part, tag + " part");
        check_distribution(regime.annotations.ground, tag + " ground");
        check_distribution(regime.annotations.agent, tag + " agent");
        check_probability(regime.annotations.causal, tag + " causal");
        check_probability(regime.annotations.impact, tag + " impact");
        check_probability(regime.annotations.negation, tag + " negation");
        check_probability(regime.annotations.inertia, tag + " inertia");
        check_pmf(spec.verbs_per_sentence[r], tag + " verbs_per_sentence", true);
    }
}

SynthResult generate_corpus(const RegimeSpec& spec, int n_texts,
                            std::uint64_t seed) {
    validate_spec(spec);
    SynthResult result;

    for (int i = 0; i < n_texts; ++i) {
        std::mt19937_64 rng(substream(seed, "synth-text", std::uint64_t(i)));

        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%04d", i);
        Text text;
        text.text_id = buf;

        // sentence plan: circumstances, maneuvers, impact, optional comment
        std::vector<std::pair<int, int>> plan;  // (regime, part annotation value)
        for (int r = 0; r < kNumRegimes; ++r) {
            int count = int(draw_pmf(rng, spec.sentences_per_regime[r]));
            if (r == kRegimeComment && !bernoulli(rng, spec.part3_prob)) count = 0;
            for (int s = 0; s < count; ++s) plan.push_back({r, kPartOfRegime[r]});
        }

        int sent_id = 0;
        for (auto [regime_id, part] : plan) {
            const Regime& regime = spec.regimes[regime_id];
            Sentence sent;
            sent.sent_id = sent_id;
            int n_verbs = int(draw_pmf(rng, spec.verbs_per_sentence[regime_id]));

            int prev_pair = -1;
            for (int pos = 0; pos < n_verbs; ++pos) {
                int pair;
                if (prev_pair < 0) {
                    pair = int(draw(rng, effective_dist(regime.first, spec.delta)));
                } else {
                    pair = int(
                        draw(rng, effective_dist(regime.next[prev_pair], spec.delta)));
                }
                prev_pair = pair;

                VerbToken tok;
                tok.text_id = text.text_id;
                tok.sent_id = sent_id;
                tok.pos = pos;
                tok.lemma = "v" + std::to_string(pair);
                tok.category = static_cast<Category>(pair / kNumTenses);
                tok.tense = static_cast<Tense>(pair % kNumTenses);
                tok.part = static_cast<Part>(1 + int(draw(rng, regime.annotations.part)));
                tok.ground = static_cast<Ground>(draw(rng, regime.annotations.ground));
                tok.agent = static_cast<Agent>(draw(rng, regime.annotations.agent));
                tok.causal = bernoulli(rng, regime.annotations.causal);
                tok.impact = bernoulli(rng, regime.annotations.impact);
                tok.negation = bernoulli(rng, regime.annotations.negation);
                tok.inertia = bernoulli(rng, regime.annotations.inertia);
                sent.tokens.push_back(std::move(tok));
            }

            result.truth.sentences.push_back(
                SentenceTruth{text.text_id, sent_id, part, regime_id});
            for (int w = 0; w + 1 < n_verbs; ++w) {
                result.truth.windows.push_back(
                    WindowTruth{text.text_id, sent_id, w, regime_id});
            }
            text.sentences.push_back(std::move(sent));
            ++sent_id;
        }
        result.corpus.texts.push_back(std::move(text));
    }
    return result;
}

void save_ground_truth(const GroundTruth& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write ground truth file '" + path + "'");
    out << "text_id,sent_id,window_start_pos,true_regime\n";
    for (const auto& w : truth.windows) {
        out << w.text_id << ',' << w.sent_id << ',' << w.window_start_pos << ','
            << w.regime << '\n';
    }
}

GroundTruth load_ground_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ground truth file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) ||
        line != "text_id,sent_id,window_start_pos,true_regime") {
        throw FormatError("bad ground truth header in '" + path + "'");
    }
    GroundTruth truth;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        WindowTruth w;
        std::string field;
        std::getline(ss, w.text_id, ',');
        std::getline(ss, field, ',');
        w.sent_id = std::stoi(field);
        std::getline(ss, field, ',');
        w.window_start_pos = std::stoi(field);
        std::getline(ss, field, ',');
        w.regime = std::stoi(field);
        truth.windows.push_back(std::move(w));
    }
    return truth;
}

ImpliedMarginals implied_marginals(const RegimeSpec& spec) {
    validate_spec(spec);

    // expected sentence counts per regime
    std::array<double, kNumRegimes> sentences{};
    for (int r = 0; r < kNumRegimes; ++r) {
        sentences[r] = expected_value(spec.sentences_per_regime[r]);
    }
    sentences[kRegimeComment] *= spec.part3_prob;

    std::array<double, kNumPairs> mass{};
    double total_verbs = 0.0;

    for (int r = 0; r < kNumRegimes; ++r) {
        const auto& pmf = spec.verbs_per_sentence[r];
        const std::size_t max_verbs = pmf.size() - 1;

        auto first = effective_dist(spec.regimes[r].first, spec.delta);
        std::array<std::array<double, kNumPairs>, kNumPairs> next;
        for (int i = 0; i < kNumPairs; ++i) {
            next[i] = effective_dist(spec.regimes[r].next[i], spec.delta);
        }

        std::array<double, kNumPairs> dist = first;
        for (std::size_t j = 1; j <= max_verbs; ++j) {
            double p_at_least_j = 0.0;
            for (std::size_t v = j; v < pmf.size(); ++v) p_at_least_j += pmf[v];
            for (int p = 0; p < kNumPairs; ++p) {
                mass[p] += sentences[r] * p_at_least_j * dist[p];
            }
            total_verbs += sentences[r] * p_at_least_j;
            // chain one step: distribution of verb j+1
            std::array<double, kNumPairs> stepped{};
            for (int a = 0; a < kNumPairs; ++a) {
                if (dist[a] == 0.0) continue;
                for (int b = 0; b < kNumPairs; ++b) stepped[b] += dist[a] * next[a][b];
            }
            dist = stepped;
        }
    }

    ImpliedMarginals m;
    for (int p = 0; p < kNumPairs; ++p) {
        m.category[p / kNumTenses] += mass[p] / total_verbs;
        m.tense[p % kNumTenses] += mass[p] / total_verbs;
    }
    return m;
}

namespace {

using PairWeight = std::pair<std::pair<Category, Tense>, double>;

std::array<double, kNumPairs> make_dist(std::initializer_list<PairWeight> items) {
    std::array<double, kNumPairs> d{};
    for (const auto& [pair, weight] : items) {
        d[pair_index(pair.first, pair.second)] += weight;
    }
    return d;
}

void fill_next(Regime& regime, const std::array<double, kNumPairs>& row) {
    for (int i = 0; i < kNumPairs; ++i) regime.next[i] = row;
}

}  // namespace

RegimeSpec default_paper_spec() {
    using C = Category;
    using T = Tense;
    RegimeSpec spec;
    spec.delta = 0.88;
    spec.part3_prob = 0.35;
    spec.sentences_per_regime[kRegimeCircumstance] = {0.0, 0.65, 0.30, 0.05};
    spec.sentences_per_regime[kRegimeManeuver] = {0.0, 0.45, 0.45, 0.10};
    spec.sentences_per_regime[kRegimeImpact] = {0.0, 0.50, 0.43, 0.07};
    spec.sentences_per_regime[kRegimeComment] = {0.0, 1.0};

    // Circumstances: openings in the imparfait, states and activities
    // chained within the sentence.
    Regime& circ = spec.regimes[kRegimeCircumstance];
    circ.name = "circumstance";
    circ.first = make_dist({{{C::sta, T::IM}, 0.75},
                            {{C::act, T::IM}, 0.25}});
    fill_next(circ, make_dist({{{C::sta, T::IM}, 0.67},
                               {{C::act, T::IM}, 0.33}}));
    circ.next[pair_index(C::act, T::IM)] = make_dist({{{C::sta, T::IM}, 0.74},
                                                      {{C::act, T::IM}, 0.26}});
    circ.annotations.part = {0.90, 0.05, 0.05};
    circ.annotations.ground = {0.05, 0.70, 0.25};
    circ.annotations.agent = {0.60, 0.15, 0.05, 0.20};
    circ.annotations.causal = 0.05;
    circ.annotations.impact = 0.02;
    circ.annotations.negation = 0.05;
    circ.annotations.inertia = 0.45;

    // Maneuvers before the accident: goal infinitives and participle
    // constructions chaining accomplishments.
    Regime& buildup = spec.regimes[kRegimeManeuver];
    buildup.name = "maneuver";
    buildup.first = make_dist({{{C::acc, T::inf}, 0.78},
                               {{C::ach, T::inf}, 0.22}});
    fill_next(buildup, make_dist({{{C::acc, T::inf}, 0.27},
                                  {{C::ach, T::inf}, 0.12},
                                  {{C::acc, T::ppr}, 0.49},
                                  {{C::ach, T::ppr}, 0.12}}));
    buildup.next[pair_index(C::acc, T::ppr)] =
        make_dist({{{C::acc, T::inf}, 0.33},
                   {{C::ach, T::inf}, 0.12},
                   {{C::acc, T::ppr}, 0.43},
                   {{C::ach, T::ppr}, 0.12}});
    buildup.annotations.part = {0.25, 0.70, 0.05};
    buildup.annotations.ground = {0.35, 0.25, 0.40};
    buildup.annotations.agent = {0.40, 0.40, 0.05, 0.15};
    buildup.annotations.causal = 0.55;
    buildup.annotations.impact = 0.10;
    buildup.annotations.negation = 0.10;
    buildup.annotations.inertia = 0.35;

    // Impact: the perfective event chain closing the accident.
    Regime& impact = spec.regimes[kRegimeImpact];
    impact.name = "impact";
    impact.first = make_dist({{{C::ach, T::PC}, 0.75},
                              {{C::acc, T::PC}, 0.25}});
    fill_next(impact, make_dist({{{C::ach, T::PC}, 0.75},
                                 {{C::acc, T::PC}, 0.25}}));
    impact.next[pair_index(C::acc, T::PC)] = make_dist({{{C::ach, T::PC}, 0.82},
                                                        {{C::acc, T::PC}, 0.18}});
    impact.annotations.part = {0.02, 0.90, 0.08};
    impact.annotations.ground = {0.70, 0.05, 0.25};
    impact.annotations.agent = {0.30, 0.50, 0.10, 0.10};
    impact.annotations.causal = 0.75;
    impact.annotations.impact = 0.85;
    impact.annotations.negation = 0.10;
    impact.annotations.inertia = 0.15;

    // Comments: present-tense states closed by perfective statements.
    Regime& comment = spec.regimes[kRegimeComment];
    comment.name = "comment";
    comment.first = make_dist({{{C::sta, T::PR}, 1.0}});
    fill_next(comment, make_dist({{{C::sta, T::PC}, 1.0}}));
    comment.annotations.part = {0.05, 0.10, 0.85};
    comment.annotations.ground = {0.20, 0.20, 0.60};
    comment.annotations.agent = {0.30, 0.20, 0.10, 0.40};
    comment.annotations.causal = 0.10;
    comment.annotations.impact = 0.20;
    comment.annotations.negation = 0.15;
    comment.annotations.inertia = 0.20;

    spec.verbs_per_sentence[kRegimeCircumstance] = {0.0, 0.0, 0.60, 0.40};
    spec.verbs_per_sentence[kRegimeManeuver] = {0.0, 0.0, 0.30, 0.70};
    spec.verbs_per_sentence[kRegimeImpact] = {0.0, 0.0, 0.30, 0.60, 0.10};
    spec.verbs_per_sentence[kRegimeComment] = {0.0, 0.0, 0.80, 0.20};
    return spec;
}

}  // namespace verbseq
