#include "gdd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "gdd/errors.hpp"

namespace gdd {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
};

class Tokens {
public:
  explicit Tokens(std::string_view text)
  {
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
      const char ch = text[i];
      if (ch == '\n') {
        ++line;
        ++i;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
      } else {
        const std::size_t begin = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
          ++i;
        tokens_.push_back({text.substr(begin, i - begin), line});
      }
    }
    last_line_ = tokens_.empty() ? line : tokens_.back().line;
  }

  const Token& next(const char* expected)
  {
    if (pos_ >= tokens_.size())
      throw ParseError(last_line_, std::string("unexpected end of input, expected ") + expected);
    return tokens_[pos_++];
  }

  long integer(const char* expected)
  {
    const auto& t = next(expected);
    long v = 0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || end != t.text.data() + t.text.size())
      throw ParseError(t.line, "expected " + std::string(expected) + ", got '" +
                                   std::string(t.text) + "'");
    return v;
  }

  double real(const char* expected, std::size_t* line)
  {
    const auto& t = next(expected);
    *line = t.line;
    const std::string s(t.text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
      throw ParseError(t.line, "expected " + std::string(expected) + ", got '" + s + "'");
    return v;
  }

  bool done() const { return pos_ >= tokens_.size(); }
  std::size_t line() const { return pos_ < tokens_.size() ? tokens_[pos_].line : last_line_; }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 1;
};

std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}

FactorGraph parse_uai(std::string_view text, double log_floor)
{
  Tokens in(text);
  {
    const auto& header = in.next("network type");
    if (header.text != "MARKOV")
      throw ParseError(header.line, "unsupported network type '" + std::string(header.text) +
                                        "', only MARKOV is read");
  }
  const std::size_t count_line = in.line();
  const long num_vars = in.integer("variable count");
  if (num_vars < 0)
    throw ParseError(count_line, "negative variable count");

  ModelDescription model;
  for (long i = 0; i < num_vars; ++i) {
    const std::size_t line = in.line();
    const long k = in.integer("cardinality");
    if (k < 1)
      throw ParseError(line, "cardinality must be positive, got " + std::to_string(k));
    model.cardinalities.push_back(static_cast<int>(k));
  }

  const std::size_t factor_line = in.line();
  const long num_factors = in.integer("factor count");
  if (num_factors < 0)
    throw ParseError(factor_line, "negative factor count");
  model.factors.resize(static_cast<std::size_t>(num_factors));
  for (auto& f : model.factors) {
    const std::size_t line = in.line();
    const long size = in.integer("scope size");
    if (size < 1)
      throw ParseError(line, "scope size must be positive");
    for (long j = 0; j < size; ++j) {
      const std::size_t var_line = in.line();
      const long v = in.integer("variable index");
      if (v < 0 || v >= num_vars)
        throw ParseError(var_line, "variable " + std::to_string(v) + " out of range for " +
                                       std::to_string(num_vars) + " variables");
      if (std::find(f.variables.begin(), f.variables.end(), static_cast<int>(v)) !=
          f.variables.end())
        throw ParseError(var_line, "variable " + std::to_string(v) + " repeated in a scope");
      f.variables.push_back(static_cast<int>(v));
    }
  }

  for (auto& f : model.factors) {
    std::size_t expected = 1;
    for (int v : f.variables)
      expected *= static_cast<std::size_t>(model.cardinalities[v]);
    const std::size_t line = in.line();
    const long n = in.integer("table size");
    if (n < 0 || static_cast<std::size_t>(n) != expected)
      throw ParseError(line, "table size " + std::to_string(n) + " does not match scope (" +
                                 std::to_string(expected) + " entries)");
    f.values.reserve(expected);
    for (std::size_t j = 0; j < expected; ++j) {
      std::size_t value_line = 0;
      const double w = in.real("table entry", &value_line);
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ParseError(value_line, "table entries must be finite and nonnegative");
      f.values.push_back(w > 0.0 ? std::max(std::log(w), log_floor) : log_floor);
    }
  }
  if (!in.done())
    throw ParseError(in.line(), "trailing tokens after the last table");

  try {
    return FactorGraph(model);
  } catch (const InvalidModel& e) {
    throw ParseError(1, e.what());
  }
}

std::string write_uai(const FactorGraph& graph)
{
  std::ostringstream out;
  out << "MARKOV\n" << graph.num_vars() << '\n';
  for (std::size_t i = 0; i < graph.num_vars(); ++i)
    out << (i ? " " : "") << graph.cardinalities()[i];
  out << '\n' << graph.num_clusters() << '\n';
  for (const auto& p : graph.potentials()) {
    out << p.scope.size();
    for (int v : p.scope)
      out << ' ' << v;
    out << '\n';
  }
  for (const auto& p : graph.potentials()) {
    out << '\n' << p.values.size() << '\n';
    for (std::size_t i = 0; i < p.values.size(); ++i)
      out << (i ? " " : "") << format_double(std::exp(p.values[i]));
    out << '\n';
  }
  return out.str();
}

nlohmann::json model_to_json(const FactorGraph& graph)
{
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& p : graph.potentials()) {
    clusters.push_back({{"variables", std::vector<int>(p.scope.begin(), p.scope.end())},
                        {"log_potentials", p.values}});
  }
  return {{"cardinalities", std::vector<int>(graph.cardinalities().begin(),
                                             graph.cardinalities().end())},
          {"clusters", std::move(clusters)}};
}

FactorGraph model_from_json(const nlohmann::json& j)
{
  try {
    ModelDescription model;
    model.cardinalities = j.at("cardinalities").get<std::vector<int>>();
    for (const auto& c : j.at("clusters")) {
      model.factors.push_back({c.at("variables").get<std::vector<int>>(),
                               c.at("log_potentials").get<std::vector<double>>()});
    }
    return FactorGraph(model);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidModel(std::string("malformed model json: ") + e.what());
  }
}

namespace {

std::string slurp(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_for_writing(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path.string());
  return out;
}

}

FactorGraph read_model(const std::filesystem::path& path)
{
  const auto text = slurp(path);
  if (path.extension() == ".uai")
    return parse_uai(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidModel(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

void write_model(const std::filesystem::path& path, const FactorGraph& graph)
{
  auto out = open_for_writing(path);
  if (path.extension() == ".uai")
    out << write_uai(graph);
  else
    out << model_to_json(graph).dump() << '\n';
  if (!out)
    throw Error("failed writing " + path.string());
}

void emit_trace(const DualTrace& trace, std::ostream& out, TraceFormat format)
{
  if (format == TraceFormat::csv) {
    out << "sweep,seconds,dual,primal,pursuit_round,algorithm\n";
    for (const auto& r : trace.records) {
      out << r.sweep << ',' << format_double(r.seconds) << ',' << format_double(r.dual) << ','
          << format_double(r.primal) << ',' << r.pursuit_round << ',' << r.algorithm << '\n';
    }
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : trace.records) {
    nlohmann::json rec;
    rec["sweep"] = r.sweep;
    rec["seconds"] = r.seconds;
    rec["dual"] = r.dual;
    rec["primal"] = r.primal;
    rec["pursuit_round"] = r.pursuit_round;
    rec["algorithm"] = r.algorithm;
    j.push_back(std::move(rec));
  }
  out << j.dump(1) << '\n';
}

void emit_trace(const DualTrace& trace, const std::filesystem::path& path, TraceFormat format)
{
  auto out = open_for_writing(path);
  emit_trace(trace, out, format);
  out.flush();
  if (!out)
    throw Error("failed writing " + path.string());
}

DualTrace parse_trace_json(std::string_view text)
{
  DualTrace trace;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& rec : j) {
      trace.records.push_back(TraceRecord{rec.at("sweep").get<long>(),
                                          rec.at("seconds").get<double>(),
                                          rec.at("dual").get<double>(),
                                          rec.at("primal").get<double>(),
                                          rec.at("pursuit_round").get<int>(),
                                          rec.at("algorithm").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("malformed trace json: ") + e.what());
  }
  return trace;
}

}
