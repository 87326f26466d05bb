#include "verbseq/markov.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "verbseq/errors.hpp"
#include "verbseq/rng.hpp"

namespace verbseq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_symbols(const std::vector<SymbolSequence>& sequences, int m) {
    for (const auto& seq : sequences) {
        for (int s : seq.symbols) {
            if (s < 0 || s >= m) {
                throw SymbolOutOfRangeError(
                    "symbol " + std::to_string(s) + " outside alphabet [0, " +
                    std::to_string(m) + ") in text '" + seq.text_id + "' sentence " +
                    std::to_string(seq.sent_id));
            }
        }
    }
}

std::vector<double> random_stochastic_row(std::mt19937_64& rng, int n) {
    std::vector<double> row(n);
    double sum = 0.0;
    for (double& v : row) {
        v = 0.1 + uniform_double(rng);  // bounded away from zero
        sum += v;
    }
    for (double& v : row) v /= sum;
    return row;
}

struct ExpectedCounts {
    std::vector<double> initial;
    std::vector<std::vector<double>> transition_num;
    std::vector<double> transition_den;
    std::vector<std::vector<double>> emission_num;
    std::vector<double> emission_den;
    double loglik = 0.0;
    double weight = 0.0;  // number of sequences accumulated

    ExpectedCounts(int k, int m)
        : initial(k, 0.0),
          transition_num(k, std::vector<double>(k, 0.0)),
          transition_den(k, 0.0),
          emission_num(k, std::vector<double>(m, 0.0)),
          emission_den(k, 0.0) {}
};

// Scaled forward pass. Returns per-step scale factors; an all-zero step
// leaves the remaining scales at zero (impossible sequence).
bool scaled_forward(const HmmModel& model, const std::vector<int>& obs,
                    std::vector<std::vector<double>>& alpha,
                    std::vector<double>& scale) {
    const int k = model.num_states;
    const std::size_t t_len = obs.size();
    alpha.assign(t_len, std::vector<double>(k, 0.0));
    scale.assign(t_len, 0.0);

    double c = 0.0;
    for (int i = 0; i < k; ++i) {
        alpha[0][i] = model.initial[i] * model.emission[i][obs[0]];
        c += alpha[0][i];
    }
    if (c == 0.0) return false;
    scale[0] = c;
    for (int i = 0; i < k; ++i) alpha[0][i] /= c;

    for (std::size_t t = 1; t < t_len; ++t) {
        c = 0.0;
        for (int j = 0; j < k; ++j) {
            double sum = 0.0;
            for (int i = 0; i < k; ++i) {
                sum += alpha[t - 1][i] * model.transition[i][j];
            }
            alpha[t][j] = sum * model.emission[j][obs[t]];
            c += alpha[t][j];
        }
        if (c == 0.0) return false;
        scale[t] = c;
        for (int j = 0; j < k; ++j) alpha[t][j] /= c;
    }
    return true;
}

void scaled_backward(const HmmModel& model, const std::vector<int>& obs,
                     const std::vector<double>& scale,
                     std::vector<std::vector<double>>& beta) {
    const int k = model.num_states;
    const std::size_t t_len = obs.size();
    beta.assign(t_len, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) beta[t_len - 1][i] = 1.0;
    for (std::size_t t = t_len - 1; t-- > 0;) {
        for (int i = 0; i < k; ++i) {
            double sum = 0.0;
            for (int j = 0; j < k; ++j) {
                sum += model.transition[i][j] * model.emission[j][obs[t + 1]] *
                       beta[t + 1][j];
            }
            beta[t][i] = sum / scale[t + 1];
        }
    }
}

// E-step over all sequences; returns total log-likelihood of `model`.
double accumulate_counts(const HmmModel& model,
                         const std::vector<SymbolSequence>& sequences,
                         ExpectedCounts& counts) {
    const int k = model.num_states;
    double total_ll = 0.0;
    std::vector<std::vector<double>> alpha, beta;
    std::vector<double> scale;

    for (const auto& seq : sequences) {
        const auto& obs = seq.symbols;
        if (obs.empty()) continue;
        if (!scaled_forward(model, obs, alpha, scale)) return kNegInf;
        for (double c : scale) total_ll += std::log(c);
        scaled_backward(model, obs, scale, beta);

        const std::size_t t_len = obs.size();
        for (int i = 0; i < k; ++i) {
            double g0 = alpha[0][i] * beta[0][i];
            counts.initial[i] += g0;
        }
        for (std::size_t t = 0; t < t_len; ++t) {
            for (int i = 0; i < k; ++i) {
                double gamma = alpha[t][i] * beta[t][i];
                counts.emission_num[i][obs[t]] += gamma;
                counts.emission_den[i] += gamma;
                if (t + 1 < t_len) counts.transition_den[i] += gamma;
            }
        }
        for (std::size_t t = 0; t + 1 < t_len; ++t) {
            for (int i = 0; i < k; ++i) {
                double a_i = alpha[t][i];
                if (a_i == 0.0) continue;
                for (int j = 0; j < k; ++j) {
                    double xi = a_i * model.transition[i][j] *
                                model.emission[j][obs[t + 1]] * beta[t + 1][j] /
                                scale[t + 1];
                    counts.transition_num[i][j] += xi;
                }
            }
        }
        counts.weight += 1.0;
    }
    return total_ll;
}

void apply_m_step(HmmModel& model, const ExpectedCounts& counts) {
    const int k = model.num_states;
    const int m = model.alphabet_size;

    double pi_sum = 0.0;
    for (double v : counts.initial) pi_sum += v;
    if (pi_sum > 1e-300) {
        for (int i = 0; i < k; ++i) model.initial[i] = counts.initial[i] / pi_sum;
    }
    for (int i = 0; i < k; ++i) {
        if (counts.transition_den[i] > 1e-300) {
            double row_sum = 0.0;
            for (int j = 0; j < k; ++j) row_sum += counts.transition_num[i][j];
            if (row_sum > 1e-300) {
                for (int j = 0; j < k; ++j) {
                    model.transition[i][j] = counts.transition_num[i][j] / row_sum;
                }
            }
        }
        if (counts.emission_den[i] > 1e-300) {
            for (int s = 0; s < m; ++s) {
                model.emission[i][s] = counts.emission_num[i][s] / counts.emission_den[i];
            }
        }
    }
}

}  // namespace

std::vector<std::vector<double>> empirical_transitions(
    const std::vector<SymbolSequence>& sequences, int alphabet_size,
    double alpha) {
    if (alphabet_size < 1) throw InvalidKError("empirical_transitions: M < 1");
    check_symbols(sequences, alphabet_size);

    const int m = alphabet_size;
    std::vector<std::vector<double>> counts(m, std::vector<double>(m, 0.0));
    std::vector<double> outgoing(m, 0.0);
    for (const auto& seq : sequences) {
        for (std::size_t t = 0; t + 1 < seq.symbols.size(); ++t) {
            counts[seq.symbols[t]][seq.symbols[t + 1]] += 1.0;
            outgoing[seq.symbols[t]] += 1.0;
        }
    }

    std::vector<std::vector<double>> p(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
        double den = outgoing[i] + alpha * m;
        if (den == 0.0) {
            for (int j = 0; j < m; ++j) p[i][j] = 1.0 / m;
        } else {
            for (int j = 0; j < m; ++j) p[i][j] = (counts[i][j] + alpha) / den;
        }
    }
    return p;
}

BaumWelchResult baum_welch(const std::vector<SymbolSequence>& sequences,
                           int num_states, int alphabet_size,
                           std::uint64_t seed, int max_iter, double tol) {
    if (num_states < 1) throw InvalidKError("baum_welch: K must be >= 1");
    if (alphabet_size < 1) throw InvalidKError("baum_welch: M must be >= 1");
    if (sequences.empty()) throw EmptySamplesError("baum_welch: no sequences");
    check_symbols(sequences, alphabet_size);

    const int k = num_states;
    const int m = alphabet_size;

    HmmModel model;
    model.num_states = k;
    model.alphabet_size = m;
    std::mt19937_64 rng(seed);
    model.initial = random_stochastic_row(rng, k);
    for (int i = 0; i < k; ++i) {
        model.transition.push_back(random_stochastic_row(rng, k));
    }
    for (int i = 0; i < k; ++i) {
        model.emission.push_back(random_stochastic_row(rng, m));
    }

    BaumWelchResult result;
    result.seed = seed;
    for (int iter = 0; iter < max_iter; ++iter) {
        ExpectedCounts counts(k, m);
        double ll = accumulate_counts(model, sequences, counts);
        if (!result.loglik_trace.empty() &&
            ll - result.loglik_trace.back() < tol) {
            result.loglik_trace.push_back(ll);
            result.model = model;
            return result;
        }
        result.loglik_trace.push_back(ll);
        apply_m_step(model, counts);
    }
    // Iteration cap reached; record the final model's likelihood so the
    // trace always ends at the returned parameters.
    double final_ll = 0.0;
    for (const auto& seq : sequences) {
        SymbolSequence s = seq;
        final_ll += forward_log_likelihood(model, s);
    }
    result.loglik_trace.push_back(final_ll);
    result.model = model;
    return result;
}

double forward_log_likelihood(const HmmModel& model,
                              const SymbolSequence& sequence) {
    check_symbols({sequence}, model.alphabet_size);
    if (sequence.symbols.empty()) return 0.0;
    std::vector<std::vector<double>> alpha;
    std::vector<double> scale;
    if (!scaled_forward(model, sequence.symbols, alpha, scale)) return kNegInf;
    double ll = 0.0;
    for (double c : scale) ll += std::log(c);
    return ll;
}

ViterbiResult viterbi(const HmmModel& model, const SymbolSequence& sequence) {
    check_symbols({sequence}, model.alphabet_size);
    ViterbiResult result;
    if (sequence.symbols.empty()) return result;

    const int k = model.num_states;
    const auto& obs = sequence.symbols;
    const std::size_t t_len = obs.size();

    std::vector<std::vector<double>> delta(t_len, std::vector<double>(k, kNegInf));
    std::vector<std::vector<int>> back(t_len, std::vector<int>(k, 0));

    for (int i = 0; i < k; ++i) {
        delta[0][i] = std::log(model.initial[i]) + std::log(model.emission[i][obs[0]]);
    }
    for (std::size_t t = 1; t < t_len; ++t) {
        for (int j = 0; j < k; ++j) {
            double best = kNegInf;
            int best_i = 0;
            for (int i = 0; i < k; ++i) {
                double cand = delta[t - 1][i] + std::log(model.transition[i][j]);
                if (cand > best) {
                    best = cand;
                    best_i = i;
                }
            }
            delta[t][j] = best + std::log(model.emission[j][obs[t]]);
            back[t][j] = best_i;
        }
    }

    int best_state = 0;
    for (int i = 1; i < k; ++i) {
        if (delta[t_len - 1][i] > delta[t_len - 1][best_state]) best_state = i;
    }
    result.log_prob = delta[t_len - 1][best_state];
    result.states.assign(t_len, 0);
    result.states[t_len - 1] = best_state;
    for (std::size_t t = t_len - 1; t-- > 0;) {
        result.states[t] = back[t + 1][result.states[t + 1]];
    }
    return result;
}

std::vector<SymbolSequence> bmu_sequences(
    const std::vector<VerbSequence>& sequences, const SomMap& map) {
    std::vector<SymbolSequence> out;
    out.reserve(sequences.size());
    for (const auto& seq : sequences) {
        SymbolSequence sym;
        sym.text_id = seq.text_id;
        sym.sent_id = seq.sent_id;
        for (const auto& window : window_transitions(seq, 1)) {
            std::vector<double> v(window.vector.begin(), window.vector.end());
            sym.symbols.push_back(best_matching_unit(map, v).first);
        }
        out.push_back(std::move(sym));
    }
    return out;
}

}  // namespace verbseq
