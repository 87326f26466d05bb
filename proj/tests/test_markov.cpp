#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "verbseq/errors.hpp"
#include "verbseq/markov.hpp"
#include "verbseq/rng.hpp"

using namespace verbseq;

namespace {

SymbolSequence seq(std::vector<int> symbols) {
    SymbolSequence s;
    s.symbols = std::move(symbols);
    s.text_id = "t";
    return s;
}

// Brute force over all K^L hidden paths; the reference for forward/Viterbi.
struct PathEnumeration {
    double total_prob = 0.0;
    double best_prob = 0.0;
};

PathEnumeration enumerate_paths(const HmmModel& m, const std::vector<int>& obs) {
    PathEnumeration result;
    const int k = m.num_states;
    const std::size_t len = obs.size();
    std::vector<int> path(len, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= k;

    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < len; ++i) {
            path[i] = int(c % k);
            c /= k;
        }
        double p = m.initial[path[0]] * m.emission[path[0]][obs[0]];
        for (std::size_t t = 1; t < len; ++t) {
            p *= m.transition[path[t - 1]][path[t]] * m.emission[path[t]][obs[t]];
        }
        result.total_prob += p;
        result.best_prob = std::max(result.best_prob, p);
    }
    return result;
}

HmmModel random_model(std::mt19937_64& rng, int k, int m) {
    auto row = [&](int n) {
        std::vector<double> r(n);
        double sum = 0.0;
        for (double& v : r) {
            v = 0.05 + uniform_double(rng);
            sum += v;
        }
        for (double& v : r) v /= sum;
        return r;
    };
    HmmModel model;
    model.num_states = k;
    model.alphabet_size = m;
    model.initial = row(k);
    for (int i = 0; i < k; ++i) model.transition.push_back(row(k));
    for (int i = 0; i < k; ++i) model.emission.push_back(row(m));
    return model;
}

std::vector<SymbolSequence> random_sequences(std::mt19937_64& rng, int count,
                                             int max_len, int m) {
    std::vector<SymbolSequence> out;
    for (int i = 0; i < count; ++i) {
        SymbolSequence s;
        s.text_id = "r" + std::to_string(i);
        int len = 1 + int(uniform_index(rng, std::size_t(max_len)));
        for (int t = 0; t < len; ++t) {
            s.symbols.push_back(int(uniform_index(rng, std::size_t(m))));
        }
        out.push_back(std::move(s));
    }
    return out;
}

void check_stochastic(const HmmModel& m, double tol = 1e-9) {
    double pi_sum = 0.0;
    for (double v : m.initial) {
        CHECK(v >= 0.0);
        pi_sum += v;
    }
    CHECK(pi_sum == doctest::Approx(1.0).epsilon(tol));
    for (const auto& row : m.transition) {
        double sum = 0.0;
        for (double v : row) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(tol));
    }
    for (const auto& row : m.emission) {
        double sum = 0.0;
        for (double v : row) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(tol));
    }
}

}  // namespace

TEST_CASE("empirical transitions: alternating sequence with no smoothing") {
    auto p = empirical_transitions({seq({0, 1, 0, 1})}, 2, 0.0);
    CHECK(p[0][0] == 0.0);
    CHECK(p[0][1] == 1.0);
    CHECK(p[1][0] == 1.0);
    CHECK(p[1][1] == 0.0);
}

TEST_CASE("empirical transitions: add-one smoothing hand case") {
    // counts: 0->1 once, 1->0 once
    auto p = empirical_transitions({seq({0, 1, 0})}, 2, 1.0);
    CHECK(p[0][0] == doctest::Approx(1.0 / 3.0));
    CHECK(p[0][1] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1][0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1][1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("empirical transitions: smoothing formula on repeated transitions") {
    // 0->1: 2, 1->0: 1; row0 = ((0+1)/(2+2), (2+1)/(2+2)); row1 = ((1+1)/(1+2), (0+1)/(1+2))
    auto p = empirical_transitions({seq({0, 1, 0, 1})}, 2, 1.0);
    CHECK(p[0][0] == doctest::Approx(0.25));
    CHECK(p[0][1] == doctest::Approx(0.75));
    CHECK(p[1][0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1][1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("empirical transitions: zero-count rows fall back to uniform") {
    auto p = empirical_transitions({}, 3, 0.0);
    for (const auto& row : p) {
        for (double v : row) CHECK(v == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("empirical transition rows sum to one") {
    std::mt19937_64 rng(4);
    auto seqs = random_sequences(rng, 20, 10, 5);
    for (double alpha : {0.0, 0.5, 1.0}) {
        auto p = empirical_transitions(seqs, 5, alpha);
        for (const auto& row : p) {
            double sum = 0.0;
            for (double v : row) sum += v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("empirical transitions reject out-of-range symbols") {
    CHECK_THROWS_AS(empirical_transitions({seq({0, 5})}, 2, 1.0),
                    SymbolOutOfRangeError);
}

TEST_CASE("K=1 reduces to global symbol frequencies") {
    std::vector<SymbolSequence> data = {seq({0, 1, 1}), seq({2, 1})};
    auto result = baum_welch(data, 1, 3, 77, 50, 1e-9);
    const HmmModel& m = result.model;
    CHECK(m.initial[0] == doctest::Approx(1.0));
    CHECK(m.transition[0][0] == doctest::Approx(1.0));
    // frequencies: symbol 0 once, 1 three times, 2 once, of 5
    CHECK(m.emission[0][0] == doctest::Approx(0.2));
    CHECK(m.emission[0][1] == doctest::Approx(0.6));
    CHECK(m.emission[0][2] == doctest::Approx(0.2));

    double expected_ll = std::log(0.2) + 3.0 * std::log(0.6) + std::log(0.2);
    CHECK(result.loglik_trace.back() == doctest::Approx(expected_ll).epsilon(1e-10));
}

TEST_CASE("EM traces are non-decreasing and models stay stochastic") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 25; ++trial) {
        int k = 2 + int(uniform_index(rng, 3));
        int m = 3 + int(uniform_index(rng, 3));
        auto data = random_sequences(rng, 8, 12, m);
        auto result = baum_welch(data, k, m, rng(), 40, 1e-7);
        for (std::size_t i = 1; i < result.loglik_trace.size(); ++i) {
            CHECK(result.loglik_trace[i] >= result.loglik_trace[i - 1] - 1e-8);
        }
        check_stochastic(result.model);
    }
}

TEST_CASE("generate-then-fit recovers a well-separated 2-state chain") {
    HmmModel truth;
    truth.num_states = 2;
    truth.alphabet_size = 4;
    truth.initial = {0.6, 0.4};
    truth.transition = {{0.85, 0.15}, {0.25, 0.75}};
    truth.emission = {{0.49, 0.49, 0.01, 0.01}, {0.01, 0.01, 0.49, 0.49}};

    std::mt19937_64 rng(2024);
    std::vector<SymbolSequence> data;
    int total_symbols = 0;
    while (total_symbols < 10000) {
        SymbolSequence s;
        int state = uniform_double(rng) < truth.initial[0] ? 0 : 1;
        for (int t = 0; t < 50; ++t) {
            double u = uniform_double(rng);
            double acc = 0.0;
            int sym = 3;
            for (int candidate = 0; candidate < 4; ++candidate) {
                acc += truth.emission[state][candidate];
                if (u < acc) {
                    sym = candidate;
                    break;
                }
            }
            s.symbols.push_back(sym);
            state = uniform_double(rng) < truth.transition[state][0] ? 0 : 1;
        }
        total_symbols += 50;
        data.push_back(std::move(s));
    }

    auto result = baum_welch(data, 2, 4, 99, 300, 1e-8);
    const auto& a = result.model.transition;

    // match states up to permutation via the emission split
    bool direct = result.model.emission[0][0] + result.model.emission[0][1] > 0.5;
    int s0 = direct ? 0 : 1;
    int s1 = 1 - s0;
    CHECK(std::fabs(a[s0][s0] - 0.85) < 0.05);
    CHECK(std::fabs(a[s0][s1] - 0.15) < 0.05);
    CHECK(std::fabs(a[s1][s0] - 0.25) < 0.05);
    CHECK(std::fabs(a[s1][s1] - 0.75) < 0.05);
}

TEST_CASE("baum_welch argument validation") {
    CHECK_THROWS_AS(baum_welch({seq({0})}, 0, 2, 1), InvalidKError);
    CHECK_THROWS_AS(baum_welch({}, 2, 2, 1), EmptySamplesError);
    CHECK_THROWS_AS(baum_welch({seq({7})}, 2, 2, 1), SymbolOutOfRangeError);
}

TEST_CASE("forward log-likelihood closed form for K=1") {
    HmmModel m;
    m.num_states = 1;
    m.alphabet_size = 2;
    m.initial = {1.0};
    m.transition = {{1.0}};
    m.emission = {{0.5, 0.5}};
    CHECK(forward_log_likelihood(m, seq({0, 1, 0})) ==
          doctest::Approx(3.0 * std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("forward matches exhaustive path enumeration") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 1 + int(uniform_index(rng, 3));
        int m = 2 + int(uniform_index(rng, 3));
        auto model = random_model(rng, k, m);
        int len = 1 + int(uniform_index(rng, 6));
        std::vector<int> obs;
        for (int t = 0; t < len; ++t) {
            obs.push_back(int(uniform_index(rng, std::size_t(m))));
        }
        auto enumeration = enumerate_paths(model, obs);
        double ll = forward_log_likelihood(model, seq(obs));
        CHECK(ll ==
              doctest::Approx(std::log(enumeration.total_prob)).epsilon(1e-10));
    }
}

TEST_CASE("impossible observation yields -inf, not a crash") {
    HmmModel m;
    m.num_states = 2;
    m.alphabet_size = 2;
    m.initial = {0.5, 0.5};
    m.transition = {{0.5, 0.5}, {0.5, 0.5}};
    m.emission = {{1.0, 0.0}, {1.0, 0.0}};  // symbol 1 impossible everywhere
    CHECK(forward_log_likelihood(m, seq({0, 1})) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("viterbi on K=1 gives the all-zero path at the forward likelihood") {
    HmmModel m;
    m.num_states = 1;
    m.alphabet_size = 3;
    m.initial = {1.0};
    m.transition = {{1.0}};
    m.emission = {{0.2, 0.3, 0.5}};
    SymbolSequence s = seq({2, 0, 1});
    auto v = viterbi(m, s);
    CHECK(v.states == std::vector<int>{0, 0, 0});
    CHECK(v.log_prob == doctest::Approx(forward_log_likelihood(m, s)));
}

TEST_CASE("viterbi matches exhaustive enumeration and bounds the forward") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 1 + int(uniform_index(rng, 3));
        int m = 2 + int(uniform_index(rng, 3));
        auto model = random_model(rng, k, m);
        int len = 1 + int(uniform_index(rng, 6));
        std::vector<int> obs;
        for (int t = 0; t < len; ++t) {
            obs.push_back(int(uniform_index(rng, std::size_t(m))));
        }
        auto enumeration = enumerate_paths(model, obs);
        auto v = viterbi(model, seq(obs));
        CHECK(v.log_prob ==
              doctest::Approx(std::log(enumeration.best_prob)).epsilon(1e-10));
        CHECK(v.log_prob <= forward_log_likelihood(model, seq(obs)) + 1e-12);
    }
}

TEST_CASE("viterbi follows a deterministic chain") {
    HmmModel m;
    m.num_states = 2;
    m.alphabet_size = 2;
    m.initial = {1.0, 0.0};
    m.transition = {{0.0, 1.0}, {1.0, 0.0}};  // strict alternation
    m.emission = {{1.0, 0.0}, {0.0, 1.0}};    // state i emits symbol i
    auto v = viterbi(m, seq({0, 1, 0, 1}));
    CHECK(v.states == std::vector<int>{0, 1, 0, 1});
    CHECK(v.log_prob == doctest::Approx(0.0));
}

TEST_CASE("viterbi breaks ties toward the lower state index") {
    HmmModel m;
    m.num_states = 2;
    m.alphabet_size = 1;
    m.initial = {0.5, 0.5};
    m.transition = {{0.5, 0.5}, {0.5, 0.5}};
    m.emission = {{1.0}, {1.0}};  // fully symmetric: every path tied
    auto v = viterbi(m, seq({0, 0, 0}));
    CHECK(v.states == std::vector<int>{0, 0, 0});
}

TEST_CASE("bmu_sequences bridges verb sequences to codebook symbols") {
    SomMap map;
    map.rows = 1;
    map.cols = 2;
    map.input_dim = 26;
    map.prototypes.assign(2, std::vector<double>(26, 0.0));
    // unit 0 encodes (act, IM) -> (acc, ppr); unit 1 encodes (ach, PC) -> (acc, PC)
    map.prototypes[0][1] = 1.0;
    map.prototypes[0][4] = 1.0;
    map.prototypes[0][15] = 1.0;
    map.prototypes[0][23] = 1.0;
    map.prototypes[1][3] = 1.0;
    map.prototypes[1][6] = 1.0;
    map.prototypes[1][15] = 1.0;
    map.prototypes[1][19] = 1.0;

    auto tok = [](Category c, Tense t, int pos) {
        VerbToken v;
        v.text_id = "x";
        v.pos = pos;
        v.category = c;
        v.tense = t;
        return v;
    };
    VerbSequence two;
    two.text_id = "x";
    two.tokens = {tok(Category::act, Tense::IM, 0),
                  tok(Category::acc, Tense::ppr, 1)};
    VerbSequence three;
    three.text_id = "x";
    three.tokens = {tok(Category::ach, Tense::PC, 0),
                    tok(Category::acc, Tense::PC, 1),
                    tok(Category::ach, Tense::PC, 2)};

    auto symbols = bmu_sequences({two, three}, map);
    REQUIRE(symbols.size() == 2);
    CHECK(symbols[0].symbols == std::vector<int>{0});
    CHECK(symbols[1].symbols.size() == 2);
    CHECK(symbols[1].symbols[0] == 1);
}

TEST_CASE("paper example text maps to symbol sequences of lengths 1, 1, 2") {
    Corpus corpus = load_corpus(std::string(VERBSEQ_DATA_DIR) + "/paper_example.csv");
    auto extraction = extract_sequences(corpus);

    std::vector<TransitionSample> samples;
    for (const auto& s : extraction.sequences) {
        auto w = window_transitions(s);
        samples.insert(samples.end(), w.begin(), w.end());
    }
    SomConfig config;
    config.rows = 2;
    config.cols = 2;
    config.epochs = 10;
    config.seed = 3;
    SomMap map = train_som(sample_vectors(samples), config);

    auto symbols = bmu_sequences(extraction.sequences, map);
    REQUIRE(symbols.size() == 3);
    CHECK(symbols[0].symbols.size() == 1);
    CHECK(symbols[1].symbols.size() == 1);
    CHECK(symbols[2].symbols.size() == 2);
}
