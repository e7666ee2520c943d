#include "erl/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "erl/report.hpp"
#include "json.hpp"

namespace erl {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("io: malformed JSON");
    return doc;
}

Eigen::VectorXd to_vector(const json& node, const char* what) {
    if (!node.is_array()) throw ConfigError(std::string("io: ") + what + " must be an array");
    Eigen::VectorXd v(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number()) throw ConfigError(std::string("io: ") + what + " must be numeric");
        v[i] = node[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd to_matrix(const json& node, const char* what) {
    if (!node.is_array() || node.empty())
        throw ConfigError(std::string("io: ") + what + " must be a nonempty array of rows");
    const std::size_t cols = node[0].size();
    Eigen::MatrixXd m(node.size(), cols);
    for (std::size_t r = 0; r < node.size(); ++r) {
        if (!node[r].is_array() || node[r].size() != cols)
            throw ConfigError(std::string("io: ") + what + " rows must share a length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!node[r][c].is_number())
                throw ConfigError(std::string("io: ") + what + " must be numeric");
            m(r, c) = node[r][c].get<double>();
        }
    }
    return m;
}

json from_vector(const Eigen::VectorXd& v) {
    json node = json::array();
    for (int i = 0; i < v.size(); ++i) node.push_back(v[i]);
    return node;
}

json from_matrix(const Eigen::MatrixXd& m) {
    json node = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        node.push_back(row);
    }
    return node;
}

double get_number(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number())
        throw ConfigError(std::string("io: missing numeric field '") + key + "'");
    return doc[key].get<double>();
}

}  // namespace

GaussianState load_state_json(const std::string& text) {
    const json doc = parse(text);
    const double lambda = get_number(doc, "lambda");
    const int modes = static_cast<int>(get_number(doc, "modes"));
    const Eigen::VectorXd means = to_vector(doc.value("means", json::array()), "means");
    const Eigen::MatrixXd moments = to_matrix(doc.value("moments", json::array()), "moments");
    if (doc.contains("convention") && doc["convention"] != "V")
        throw ConfigError("io: unsupported moment convention (expected \"V\")");
    if (means.size() != 2 * modes || moments.rows() != 2 * modes)
        throw ConfigError("io: means/moments size disagrees with mode count");
    try {
        return GaussianState(lambda, means, moments, 1e-8);
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("io: ") + e.what());
    }
}

std::string save_state_json(const GaussianState& state) {
    json doc;
    doc["lambda"] = state.lambda();
    doc["modes"] = state.modes();
    doc["means"] = from_vector(state.means());
    doc["moments"] = from_matrix(state.moments());
    doc["convention"] = "V";
    return doc.dump(2);
}

GaussianChannel load_channel_json(const std::string& text) {
    const json doc = parse(text);
    const double lambda = get_number(doc, "lambda");
    const Eigen::MatrixXd x = to_matrix(doc.value("X", json::array()), "X");
    const Eigen::MatrixXd noise = to_matrix(doc.value("N", json::array()), "N");
    const Eigen::VectorXd delta = to_vector(doc.value("delta", json::array()), "delta");
    try {
        return GaussianChannel(x, noise, delta, lambda);
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("io: ") + e.what());
    }
}

std::string save_channel_json(const GaussianChannel& channel) {
    json doc;
    doc["X"] = from_matrix(channel.x);
    doc["N"] = from_matrix(channel.noise);
    doc["delta"] = from_vector(channel.delta);
    doc["lambda"] = channel.lambda;
    return doc.dump(2);
}

GaussianIndicator load_indicator_json(const std::string& text) {
    const json doc = parse(text);
    if (!doc.contains("targetModes") || !doc["targetModes"].is_array())
        throw ConfigError("io: indicator requires a targetModes array");
    std::vector<int> targets;
    for (const auto& m : doc["targetModes"]) targets.push_back(m.get<int>());
    const Eigen::MatrixXd l = to_matrix(doc.value("L", json::array()), "L");
    const Eigen::VectorXd base = to_vector(doc.value("baseMean", json::array()), "baseMean");
    const Eigen::MatrixXd moments = to_matrix(doc.value("moments", json::array()), "moments");
    const double weight = doc.contains("weight") ? get_number(doc, "weight") : 1.0;
    try {
        return GaussianIndicator(targets, l, base, moments, weight);
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("io: ") + e.what());
    }
}

std::string save_indicator_json(const GaussianIndicator& ind) {
    json doc;
    json targets = json::array();
    for (int m : ind.target_modes) targets.push_back(m);
    doc["targetModes"] = targets;
    doc["L"] = from_matrix(ind.outcome_map);
    doc["baseMean"] = from_vector(ind.base_mean);
    doc["moments"] = from_matrix(ind.moments);
    doc["weight"] = ind.weight;
    return doc.dump(2);
}

DocumentKind detect_document_kind(const std::string& text) {
    const json doc = parse(text);
    if (doc.contains("targetModes")) return DocumentKind::Indicator;
    if (doc.contains("X") && doc.contains("N")) return DocumentKind::Channel;
    if (doc.contains("moments")) return DocumentKind::State;
    throw ConfigError("io: document is neither a state, a channel nor an indicator");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("io: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("io: cannot write '" + path + "'");
    out << content;
}

void write_samples_binary(const std::string& path, const OnticSampleSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("io: cannot write '" + path + "'");
    out.write("ERLSAMP1", 8);
    const std::uint32_t dim = static_cast<std::uint32_t>(set.dim());
    const std::uint64_t count = static_cast<std::uint64_t>(set.count());
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (int i = 0; i < set.count(); ++i)
        for (int c = 0; c < set.dim(); ++c) {
            const double value = set.points(i, c);
            out.write(reinterpret_cast<const char*>(&value), sizeof(value));
        }
}

OnticSampleSet read_samples_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("io: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "ERLSAMP1", 8) != 0)
        throw ConfigError("io: not a sample dump");
    std::uint32_t dim = 0;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || dim == 0 || dim % 2 != 0) throw ConfigError("io: corrupt sample dump header");
    OnticSampleSet set;
    set.points.resize(static_cast<Eigen::Index>(count), dim);
    for (std::uint64_t i = 0; i < count; ++i)
        for (std::uint32_t c = 0; c < dim; ++c) {
            double value = 0.0;
            in.read(reinterpret_cast<char*>(&value), sizeof(value));
            if (!in) throw ConfigError("io: truncated sample dump");
            set.points(static_cast<Eigen::Index>(i), c) = value;
        }
    set.source = "file:" + path;
    return set;
}

std::string outcomes_to_csv(const Eigen::MatrixXd& outcomes) {
    std::string out;
    for (int r = 0; r < outcomes.rows(); ++r) {
        for (int c = 0; c < outcomes.cols(); ++c) {
            if (c) out += ",";
            out += format_number(outcomes(r, c));
        }
        out += "\n";
    }
    return out;
}

}  // namespace erl
