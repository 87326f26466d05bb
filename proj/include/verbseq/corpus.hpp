#ifndef VERBSEQ_CORPUS_HPP
#define VERBSEQ_CORPUS_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace verbseq {

// Lexical aspectual category of a verb.
enum class Category { sta = 0, act = 1, acc = 2, ach = 3 };
inline constexpr int kNumCategories = 4;

// Grammatical tense / verb form code.
enum class Tense { IM = 0, PR, PC, PS, PQP, inf, ppr, pp, pps };
inline constexpr int kNumTenses = 9;

// Narrative part annotation: 1 circumstance, 2 accident, 3 comment.
enum class Part { circumstance = 1, accident = 2, comment = 3 };

enum class Ground { fore, back, none };
enum class Agent { A, B, C, none };

const char* to_string(Category c);
const char* to_string(Tense t);
const char* to_string(Ground g);
const char* to_string(Agent a);

Category category_from_string(const std::string& s);
Tense tense_from_string(const std::string& s);
Ground ground_from_string(const std::string& s);
Agent agent_from_string(const std::string& s);

// One annotated verb occurrence.
struct VerbToken {
    std::string text_id;
    int sent_id = 0;
    int pos = 0;
    std::string lemma;  // may be empty
    Category category = Category::sta;
    Tense tense = Tense::IM;
    Part part = Part::circumstance;
    Ground ground = Ground::none;
    Agent agent = Agent::none;
    bool causal = false;
    bool impact = false;
    bool negation = false;
    bool inertia = false;

    bool operator==(const VerbToken&) const = default;
};

struct Sentence {
    int sent_id = 0;
    std::vector<VerbToken> tokens;  // ordered by pos, contiguous from 0
};

struct Text {
    std::string text_id;
    std::vector<Sentence> sentences;
};

struct Corpus {
    std::vector<Text> texts;

    std::size_t token_count() const;
    std::size_t sentence_count() const;
    bool empty() const { return token_count() == 0; }
};

// A sentence's verbs viewed as a sequence; always length >= 2.
struct VerbSequence {
    std::string text_id;
    int sent_id = 0;
    std::vector<VerbToken> tokens;
};

struct SequenceExtraction {
    std::vector<VerbSequence> sequences;
    std::size_t dropped_sentences = 0;  // sentences with fewer than 2 verbs
};

inline constexpr int kVerbDim = 13;        // 4 category slots + 9 tense slots
inline constexpr int kTransitionDim = 26;  // two stacked verb encodings

// Encoded (verb_i, verb_i+1) window.
struct TransitionSample {
    std::array<double, kTransitionDim> vector{};
    std::string text_id;
    int sent_id = 0;
    int window_start_pos = 0;
    Category first_category = Category::sta;
    Tense first_tense = Tense::IM;
    Category second_category = Category::sta;
    Tense second_tense = Tense::IM;
};

// Required header of the corpus CSV format.
extern const char* const kCorpusHeader;

// Parses the corpus CSV format. Throws FormatError on a bad header,
// ValueError on unparsable fields (message names the line), DuplicateError
// on a repeated (text_id, sent_id, pos).
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::string& path);  // IoError if unreadable

// Canonical serialization: texts in first-appearance order, sentences by
// sent_id, tokens by pos. parse(serialize(c)) == c for validated corpora.
void serialize_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::string& path);

// One VerbSequence per sentence with >= 2 verbs; shorter sentences are
// dropped and counted.
SequenceExtraction extract_sequences(const Corpus& corpus);

// Two-hot encoding: category slot in [0,4), tense slot in [4,13).
std::array<double, kVerbDim> encode_verb(const VerbToken& token);
std::pair<Category, Tense> decode_verb(const std::array<double, kVerbDim>& v);

// All width-2, stride-1 windows of the sequence, each emitted
// `replication` times.
std::vector<TransitionSample> window_transitions(const VerbSequence& sequence,
                                                 int replication = 1);

// Corpus-level marginals (percentages over token counts).
struct DistributionTables {
    std::size_t total_tokens = 0;
    std::array<std::size_t, kNumCategories> category_counts{};
    std::array<std::size_t, kNumTenses> tense_counts{};
    std::array<double, kNumCategories> category_percent{};
    std::array<double, kNumTenses> tense_percent{};
    // tense_by_category[c][t]: row percentages, each row sums to 100.
    std::array<std::array<double, kNumTenses>, kNumCategories> tense_by_category{};
};

DistributionTables tabulate_distributions(const Corpus& corpus);  // EmptyCorpusError

}  // namespace verbseq

#endif
