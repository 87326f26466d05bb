#include "verbseq/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "verbseq/errors.hpp"

namespace verbseq {

const char* const kCorpusHeader =
    "text_id,sent_id,pos,lemma,category,tense,part,ground,agent,causal,"
    "impact,negation,inertia";

namespace {

const char* const kCategoryNames[] = {"sta", "act", "acc", "ach"};
const char* const kTenseNames[] = {"IM",  "PR",  "PC", "PS", "PQP",
                                   "inf", "ppr", "pp", "pps"};
const char* const kGroundNames[] = {"fore", "back", "none"};
const char* const kAgentNames[] = {"A", "B", "C", "none"};

template <typename Enum, std::size_t N>
Enum enum_from_string(const std::string& s, const char* const (&names)[N],
                      const char* what) {
    for (std::size_t i = 0; i < N; ++i) {
        if (s == names[i]) return static_cast<Enum>(i);
    }
    throw ValueError(std::string("unknown ") + what + " value '" + s + "'");
}

}  // namespace

const char* to_string(Category c) { return kCategoryNames[static_cast<int>(c)]; }
const char* to_string(Tense t) { return kTenseNames[static_cast<int>(t)]; }
const char* to_string(Ground g) { return kGroundNames[static_cast<int>(g)]; }
const char* to_string(Agent a) { return kAgentNames[static_cast<int>(a)]; }

Category category_from_string(const std::string& s) {
    return enum_from_string<Category>(s, kCategoryNames, "category");
}
Tense tense_from_string(const std::string& s) {
    return enum_from_string<Tense>(s, kTenseNames, "tense");
}
Ground ground_from_string(const std::string& s) {
    return enum_from_string<Ground>(s, kGroundNames, "ground");
}
Agent agent_from_string(const std::string& s) {
    return enum_from_string<Agent>(s, kAgentNames, "agent");
}

std::size_t Corpus::token_count() const {
    std::size_t n = 0;
    for (const auto& text : texts)
        for (const auto& sent : text.sentences) n += sent.tokens.size();
    return n;
}

std::size_t Corpus::sentence_count() const {
    std::size_t n = 0;
    for (const auto& text : texts) n += text.sentences.size();
    return n;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

int parse_int(const std::string& s, const char* what, std::size_t line_no) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != s.size() || s.empty()) {
        throw ValueError("line " + std::to_string(line_no) + ": bad " + what +
                         " '" + s + "'");
    }
    return value;
}

bool parse_bool(const std::string& s, const char* what, std::size_t line_no) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw ValueError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                     s + "' (expected 0 or 1)");
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty input, header missing");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCorpusHeader) {
        throw FormatError("bad header: expected '" + std::string(kCorpusHeader) +
                          "', got '" + line + "'");
    }

    Corpus corpus;
    std::map<std::string, std::size_t> text_index;
    std::set<std::tuple<std::string, int, int>> seen;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        auto fields = split_fields(line);
        if (fields.size() != 13) {
            throw ValueError("line " + std::to_string(line_no) + ": expected 13 fields, got " +
                             std::to_string(fields.size()));
        }

        VerbToken tok;
        tok.text_id = fields[0];
        if (tok.text_id.empty()) {
            throw ValueError("line " + std::to_string(line_no) + ": empty text_id");
        }
        tok.sent_id = parse_int(fields[1], "sent_id", line_no);
        tok.pos = parse_int(fields[2], "pos", line_no);
        tok.lemma = fields[3];
        try {
            tok.category = category_from_string(fields[4]);
            tok.tense = tense_from_string(fields[5]);
            int part = parse_int(fields[6], "part", line_no);
            if (part < 1 || part > 3) {
                throw ValueError("part value '" + fields[6] + "' not in {1,2,3}");
            }
            tok.part = static_cast<Part>(part);
            tok.ground = ground_from_string(fields[7]);
            tok.agent = agent_from_string(fields[8]);
        } catch (const ValueError& e) {
            throw ValueError("line " + std::to_string(line_no) + ": " + e.what());
        }
        tok.causal = parse_bool(fields[9], "causal", line_no);
        tok.impact = parse_bool(fields[10], "impact", line_no);
        tok.negation = parse_bool(fields[11], "negation", line_no);
        tok.inertia = parse_bool(fields[12], "inertia", line_no);

        auto key = std::make_tuple(tok.text_id, tok.sent_id, tok.pos);
        if (!seen.insert(key).second) {
            throw DuplicateError("line " + std::to_string(line_no) +
                                 ": duplicate (text_id, sent_id, pos) = (" +
                                 tok.text_id + ", " + std::to_string(tok.sent_id) +
                                 ", " + std::to_string(tok.pos) + ")");
        }

        auto it = text_index.find(tok.text_id);
        if (it == text_index.end()) {
            it = text_index.emplace(tok.text_id, corpus.texts.size()).first;
            corpus.texts.push_back(Text{tok.text_id, {}});
        }
        Text& text = corpus.texts[it->second];
        Sentence* sent = nullptr;
        for (auto& s : text.sentences) {
            if (s.sent_id == tok.sent_id) {
                sent = &s;
                break;
            }
        }
        if (sent == nullptr) {
            text.sentences.push_back(Sentence{tok.sent_id, {}});
            sent = &text.sentences.back();
        }
        sent->tokens.push_back(std::move(tok));
    }

    // Canonical order plus the contiguity invariant.
    for (auto& text : corpus.texts) {
        std::sort(text.sentences.begin(), text.sentences.end(),
                  [](const Sentence& a, const Sentence& b) {
                      return a.sent_id < b.sent_id;
                  });
        for (auto& sent : text.sentences) {
            std::sort(sent.tokens.begin(), sent.tokens.end(),
                      [](const VerbToken& a, const VerbToken& b) {
                          return a.pos < b.pos;
                      });
            for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
                if (sent.tokens[i].pos != static_cast<int>(i)) {
                    throw ValueError(
                        "text '" + text.text_id + "' sentence " +
                        std::to_string(sent.sent_id) +
                        ": pos values not contiguous from 0 (found pos " +
                        std::to_string(sent.tokens[i].pos) + " at index " +
                        std::to_string(i) + ")");
                }
            }
        }
    }
    return corpus;
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file '" + path + "'");
    return parse_corpus(in);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
    out << kCorpusHeader << '\n';
    for (const auto& text : corpus.texts) {
        for (const auto& sent : text.sentences) {
            for (const auto& tok : sent.tokens) {
                out << tok.text_id << ',' << sent.sent_id << ',' << tok.pos << ','
                    << tok.lemma << ',' << to_string(tok.category) << ','
                    << to_string(tok.tense) << ',' << static_cast<int>(tok.part)
                    << ',' << to_string(tok.ground) << ',' << to_string(tok.agent)
                    << ',' << (tok.causal ? '1' : '0') << ','
                    << (tok.impact ? '1' : '0') << ',' << (tok.negation ? '1' : '0')
                    << ',' << (tok.inertia ? '1' : '0') << '\n';
            }
        }
    }
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write corpus file '" + path + "'");
    serialize_corpus(corpus, out);
}

SequenceExtraction extract_sequences(const Corpus& corpus) {
    SequenceExtraction result;
    for (const auto& text : corpus.texts) {
        for (const auto& sent : text.sentences) {
            if (sent.tokens.size() < 2) {
                ++result.dropped_sentences;
                continue;
            }
            result.sequences.push_back(
                VerbSequence{text.text_id, sent.sent_id, sent.tokens});
        }
    }
    return result;
}

std::array<double, kVerbDim> encode_verb(const VerbToken& token) {
    std::array<double, kVerbDim> v{};
    v[static_cast<int>(token.category)] = 1.0;
    v[kNumCategories + static_cast<int>(token.tense)] = 1.0;
    return v;
}

std::pair<Category, Tense> decode_verb(const std::array<double, kVerbDim>& v) {
    int best_cat = 0;
    for (int c = 1; c < kNumCategories; ++c) {
        if (v[c] > v[best_cat]) best_cat = c;
    }
    int best_tense = 0;
    for (int t = 1; t < kNumTenses; ++t) {
        if (v[kNumCategories + t] > v[kNumCategories + best_tense]) best_tense = t;
    }
    return {static_cast<Category>(best_cat), static_cast<Tense>(best_tense)};
}

std::vector<TransitionSample> window_transitions(const VerbSequence& sequence,
                                                 int replication) {
    std::vector<TransitionSample> samples;
    if (sequence.tokens.size() < 2 || replication < 1) return samples;
    samples.reserve((sequence.tokens.size() - 1) * replication);
    for (std::size_t i = 0; i + 1 < sequence.tokens.size(); ++i) {
        const VerbToken& a = sequence.tokens[i];
        const VerbToken& b = sequence.tokens[i + 1];
        TransitionSample s;
        auto ea = encode_verb(a);
        auto eb = encode_verb(b);
        std::copy(ea.begin(), ea.end(), s.vector.begin());
        std::copy(eb.begin(), eb.end(), s.vector.begin() + kVerbDim);
        s.text_id = sequence.text_id;
        s.sent_id = sequence.sent_id;
        s.window_start_pos = a.pos;
        s.first_category = a.category;
        s.first_tense = a.tense;
        s.second_category = b.category;
        s.second_tense = b.tense;
        for (int r = 0; r < replication; ++r) samples.push_back(s);
    }
    return samples;
}

DistributionTables tabulate_distributions(const Corpus& corpus) {
    DistributionTables tables;
    for (const auto& text : corpus.texts) {
        for (const auto& sent : text.sentences) {
            for (const auto& tok : sent.tokens) {
                ++tables.total_tokens;
                ++tables.category_counts[static_cast<int>(tok.category)];
                ++tables.tense_counts[static_cast<int>(tok.tense)];
            }
        }
    }
    if (tables.total_tokens == 0) throw EmptyCorpusError("corpus has no tokens");

    std::array<std::array<std::size_t, kNumTenses>, kNumCategories> cross{};
    for (const auto& text : corpus.texts) {
        for (const auto& sent : text.sentences) {
            for (const auto& tok : sent.tokens) {
                ++cross[static_cast<int>(tok.category)][static_cast<int>(tok.tense)];
            }
        }
    }

    for (int c = 0; c < kNumCategories; ++c) {
        tables.category_percent[c] =
            100.0 * static_cast<double>(tables.category_counts[c]) /
            static_cast<double>(tables.total_tokens);
    }
    for (int t = 0; t < kNumTenses; ++t) {
        tables.tense_percent[t] =
            100.0 * static_cast<double>(tables.tense_counts[t]) /
            static_cast<double>(tables.total_tokens);
    }
    for (int c = 0; c < kNumCategories; ++c) {
        if (tables.category_counts[c] == 0) continue;  // row stays zero
        for (int t = 0; t < kNumTenses; ++t) {
            tables.tense_by_category[c][t] =
                100.0 * static_cast<double>(cross[c][t]) /
                static_cast<double>(tables.category_counts[c]);
        }
    }
    return tables;
}

}  // namespace verbseq
