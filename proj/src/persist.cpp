#include "verbseq/persist.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "verbseq/errors.hpp"

namespace verbseq {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v) || std::isinf(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError("bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

double json_double(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

void append_vector(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(v[i]);
    }
    out += ']';
}

void append_matrix(std::string& out, const std::vector<std::vector<double>>& m,
                   const char* indent) {
    out += "[\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += indent;
        append_vector(out, m[i]);
        if (i + 1 < m.size()) out += ',';
        out += '\n';
    }
    out += indent;
    out += ']';
}

void append_int_vector(std::string& out, const std::vector<int>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(v[i]);
    }
    out += ']';
}

}  // namespace

void save_som(const SomMap& map, const std::string& path) {
    std::string s = "{\n";
    s += "  \"rows\": " + std::to_string(map.rows) + ",\n";
    s += "  \"cols\": " + std::to_string(map.cols) + ",\n";
    s += "  \"input_dim\": " + std::to_string(map.input_dim) + ",\n";
    s += "  \"seed\": " + std::to_string(map.schedule.seed) + ",\n";
    s += "  \"schedule\": {\"epochs\": " + std::to_string(map.schedule.epochs) +
         ", \"initial_radius\": " + format_double(map.schedule.initial_radius) +
         ", \"final_radius\": " + format_double(map.schedule.final_radius) + "},\n";
    s += "  \"prototypes\": ";
    append_matrix(s, map.prototypes, "    ");
    s += "\n}\n";
    write_file(path, s);
}

SomMap load_som(const std::string& path) {
    json j = read_json(path);
    SomMap map;
    map.rows = j.at("rows").get<int>();
    map.cols = j.at("cols").get<int>();
    map.input_dim = j.at("input_dim").get<int>();
    map.schedule.rows = map.rows;
    map.schedule.cols = map.cols;
    map.schedule.seed = j.at("seed").get<std::uint64_t>();
    map.schedule.epochs = j.at("schedule").at("epochs").get<int>();
    map.schedule.initial_radius = j.at("schedule").at("initial_radius").get<double>();
    map.schedule.final_radius = j.at("schedule").at("final_radius").get<double>();
    map.prototypes = j.at("prototypes").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(map.prototypes.size()) != map.rows * map.cols) {
        throw FormatError("som artifact: prototype count does not match grid");
    }
    return map;
}

void save_hmm(const BaumWelchResult& result, const std::string& path) {
    const HmmModel& m = result.model;
    std::string s = "{\n";
    s += "  \"K\": " + std::to_string(m.num_states) + ",\n";
    s += "  \"M\": " + std::to_string(m.alphabet_size) + ",\n";
    s += "  \"seed\": " + std::to_string(result.seed) + ",\n";
    s += "  \"pi\": ";
    append_vector(s, m.initial);
    s += ",\n  \"A\": ";
    append_matrix(s, m.transition, "    ");
    s += ",\n  \"B\": ";
    append_matrix(s, m.emission, "    ");
    s += ",\n  \"loglik_trace\": ";
    append_vector(s, result.loglik_trace);
    s += "\n}\n";
    write_file(path, s);
}

BaumWelchResult load_hmm(const std::string& path) {
    json j = read_json(path);
    BaumWelchResult result;
    result.model.num_states = j.at("K").get<int>();
    result.model.alphabet_size = j.at("M").get<int>();
    result.seed = j.at("seed").get<std::uint64_t>();
    result.model.initial = j.at("pi").get<std::vector<double>>();
    result.model.transition = j.at("A").get<std::vector<std::vector<double>>>();
    result.model.emission = j.at("B").get<std::vector<std::vector<double>>>();
    for (const auto& v : j.at("loglik_trace")) {
        result.loglik_trace.push_back(v.is_null()
                                          ? -std::numeric_limits<double>::infinity()
                                          : v.get<double>());
    }
    return result;
}

void save_clustering(const ClusteringArtifact& artifact, const std::string& path) {
    std::string s = "{\n";
    s += "  \"k\": " + std::to_string(artifact.k) + ",\n";
    s += "  \"units\": ";
    append_int_vector(s, artifact.units);
    s += ",\n  \"labels\": ";
    append_int_vector(s, artifact.labels);
    s += ",\n  \"medoids\": ";
    append_int_vector(s, artifact.medoids);
    s += ",\n  \"db_score\": " + format_double(artifact.db_score) + ",\n";
    s += "  \"per_k_scores\": [";
    for (std::size_t i = 0; i < artifact.per_k_scores.size(); ++i) {
        if (i > 0) s += ", ";
        s += "{\"k\": " + std::to_string(artifact.per_k_scores[i].first) +
             ", \"db_score\": " + format_double(artifact.per_k_scores[i].second) + "}";
    }
    s += "]\n}\n";
    write_file(path, s);
}

ClusteringArtifact load_clustering(const std::string& path) {
    json j = read_json(path);
    ClusteringArtifact artifact;
    artifact.k = j.at("k").get<int>();
    artifact.units = j.at("units").get<std::vector<int>>();
    artifact.labels = j.at("labels").get<std::vector<int>>();
    artifact.medoids = j.at("medoids").get<std::vector<int>>();
    artifact.db_score = json_double(j.at("db_score"));
    for (const auto& entry : j.at("per_k_scores")) {
        artifact.per_k_scores.emplace_back(entry.at("k").get<int>(),
                                           json_double(entry.at("db_score")));
    }
    if (artifact.units.size() != artifact.labels.size()) {
        throw FormatError("clustering artifact: units/labels length mismatch");
    }
    return artifact;
}

void save_empirical(const EmpiricalMatrixArtifact& artifact,
                    const std::string& path) {
    std::string s = "{\n";
    s += "  \"M\": " + std::to_string(artifact.alphabet_size) + ",\n";
    s += "  \"alpha\": " + format_double(artifact.alpha) + ",\n";
    s += "  \"matrix\": ";
    append_matrix(s, artifact.matrix, "    ");
    s += "\n}\n";
    write_file(path, s);
}

EmpiricalMatrixArtifact load_empirical(const std::string& path) {
    json j = read_json(path);
    EmpiricalMatrixArtifact artifact;
    artifact.alphabet_size = j.at("M").get<int>();
    artifact.alpha = j.at("alpha").get<double>();
    artifact.matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
    return artifact;
}

namespace {

void append_annotation_model(std::string& s, const AnnotationModel& a) {
    s += "{\"part\": ";
    append_vector(s, {a.part.begin(), a.part.end()});
    s += ", \"ground\": ";
    append_vector(s, {a.ground.begin(), a.ground.end()});
    s += ", \"agent\": ";
    append_vector(s, {a.agent.begin(), a.agent.end()});
    s += ", \"causal\": " + format_double(a.causal);
    s += ", \"impact\": " + format_double(a.impact);
    s += ", \"negation\": " + format_double(a.negation);
    s += ", \"inertia\": " + format_double(a.inertia);
    s += "}";
}

template <std::size_t N>
std::array<double, N> to_array(const json& j, const char* what) {
    auto v = j.get<std::vector<double>>();
    if (v.size() != N) {
        throw FormatError(std::string("regime spec: ") + what + " must have " +
                          std::to_string(N) + " entries");
    }
    std::array<double, N> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

}  // namespace

void save_regime_spec(const RegimeSpec& spec, const std::string& path) {
    std::string s = "{\n";
    s += "  \"delta\": " + format_double(spec.delta) + ",\n";
    s += "  \"part3_prob\": " + format_double(spec.part3_prob) + ",\n";
    s += "  \"sentences_per_regime\": [\n";
    for (int r = 0; r < kNumRegimes; ++r) {
        s += "    ";
        append_vector(s, spec.sentences_per_regime[r]);
        if (r + 1 < kNumRegimes) s += ',';
        s += '\n';
    }
    s += "  ],\n  \"verbs_per_sentence\": [\n";
    for (int r = 0; r < kNumRegimes; ++r) {
        s += "    ";
        append_vector(s, spec.verbs_per_sentence[r]);
        if (r + 1 < kNumRegimes) s += ',';
        s += '\n';
    }
    s += "  ],\n  \"regimes\": [\n";
    for (int r = 0; r < kNumRegimes; ++r) {
        const Regime& regime = spec.regimes[r];
        s += "    {\"name\": \"" + regime.name + "\",\n     \"first\": ";
        append_vector(s, {regime.first.begin(), regime.first.end()});
        s += ",\n     \"next\": [\n";
        for (int i = 0; i < kNumPairs; ++i) {
            s += "       ";
            append_vector(s, {regime.next[i].begin(), regime.next[i].end()});
            if (i + 1 < kNumPairs) s += ',';
            s += '\n';
        }
        s += "     ],\n     \"annotations\": ";
        append_annotation_model(s, regime.annotations);
        s += "}";
        if (r + 1 < kNumRegimes) s += ',';
        s += '\n';
    }
    s += "  ]\n}\n";
    write_file(path, s);
}

RegimeSpec load_regime_spec(const std::string& path) {
    json j = read_json(path);
    RegimeSpec spec;
    spec.delta = j.at("delta").get<double>();
    spec.part3_prob = j.at("part3_prob").get<double>();
    const auto& spr = j.at("sentences_per_regime");
    const auto& vps = j.at("verbs_per_sentence");
    if (spr.size() != kNumRegimes || vps.size() != kNumRegimes ||
        j.at("regimes").size() != kNumRegimes) {
        throw FormatError("regime spec: expected " + std::to_string(kNumRegimes) +
                          " regimes");
    }
    for (int r = 0; r < kNumRegimes; ++r) {
        spec.sentences_per_regime[r] = spr[r].get<std::vector<double>>();
        spec.verbs_per_sentence[r] = vps[r].get<std::vector<double>>();
        const auto& jr = j.at("regimes")[r];
        Regime& regime = spec.regimes[r];
        regime.name = jr.at("name").get<std::string>();
        regime.first = to_array<kNumPairs>(jr.at("first"), "first");
        const auto& next = jr.at("next");
        if (next.size() != kNumPairs) {
            throw FormatError("regime spec: next must have 36 rows");
        }
        for (int i = 0; i < kNumPairs; ++i) {
            regime.next[i] = to_array<kNumPairs>(next[i], "next row");
        }
        const auto& ann = jr.at("annotations");
        regime.annotations.part = to_array<3>(ann.at("part"), "part");
        regime.annotations.ground = to_array<3>(ann.at("ground"), "ground");
        regime.annotations.agent = to_array<4>(ann.at("agent"), "agent");
        regime.annotations.causal = ann.at("causal").get<double>();
        regime.annotations.impact = ann.at("impact").get<double>();
        regime.annotations.negation = ann.at("negation").get<double>();
        regime.annotations.inertia = ann.at("inertia").get<double>();
    }
    validate_spec(spec);
    return spec;
}

}  // namespace verbseq
