#pragma once

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gdd/factor_graph.hpp"
#include "gdd/gdd_engine.hpp"

namespace gdd {

// UAI "MARKOV" text. Tables hold nonnegative weights, last scope variable
// fastest; they are converted with log, zero entries mapped to `log_floor`.
// Throws ParseError carrying the line of the offending token.
FactorGraph parse_uai(std::string_view text, double log_floor = std::log(1e-300));

// UAI text with exp(θ) weights printed to 17 significant digits.
std::string write_uai(const FactorGraph& graph);

// Native model schema:
//   {"cardinalities": [k0, k1, ...],
//    "clusters": [{"variables": [...], "log_potentials": [...]}, ...]}
// Variables are 0-based; tables are row-major over "variables" as listed.
nlohmann::json model_to_json(const FactorGraph& graph);
FactorGraph model_from_json(const nlohmann::json& j);

// Chooses the format by extension: ".uai" for UAI, anything else JSON.
FactorGraph read_model(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const FactorGraph& graph);

enum class TraceFormat { csv, json };

// CSV: header "sweep,seconds,dual,primal,pursuit_round,algorithm", numbers
// as %.17g. JSON: an array of objects with the same keys.
void emit_trace(const DualTrace& trace, std::ostream& out, TraceFormat format);
void emit_trace(const DualTrace& trace, const std::filesystem::path& path, TraceFormat format);
DualTrace parse_trace_json(std::string_view text);

}
