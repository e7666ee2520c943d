#pragma once

#include <string>

#include "erl/channel.hpp"
#include "erl/measurement.hpp"
#include "erl/sampler.hpp"
#include "erl/state.hpp"

namespace erl {

// File formats. States:
//   {"lambda": x, "modes": n, "means": [2n], "moments": [2n rows of 2n], "convention": "V"}
// Channels:
//   {"X": matrix, "N": matrix, "delta": vector, "lambda": x}
// Indicators: the state format plus
//   {"targetModes": [...], "L": matrix, "baseMean": [...], "weight": w}
// Parse problems throw ConfigError; the loader rejects moment matrices that
// are asymmetric beyond 1e-8.

GaussianState load_state_json(const std::string& text);
std::string save_state_json(const GaussianState& state);

GaussianChannel load_channel_json(const std::string& text);
std::string save_channel_json(const GaussianChannel& channel);

GaussianIndicator load_indicator_json(const std::string& text);
std::string save_indicator_json(const GaussianIndicator& ind);

enum class DocumentKind { State, Channel, Indicator };
DocumentKind detect_document_kind(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Sample dumps: little-endian binary with an 8-byte magic "ERLSAMP1",
// then uint32 dim, uint64 count, then count*dim float64 values row-major.
void write_samples_binary(const std::string& path, const OnticSampleSet& set);
OnticSampleSet read_samples_binary(const std::string& path);

/// One outcome per row, comma-separated, no header.
std::string outcomes_to_csv(const Eigen::MatrixXd& outcomes);

}  // namespace erl
