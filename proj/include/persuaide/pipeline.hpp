#ifndef PERSUAIDE_PIPELINE_HPP
#define PERSUAIDE_PIPELINE_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "persuaide/adapter.hpp"
#include "persuaide/conllu.hpp"
#include "persuaide/errors.hpp"
#include "persuaide/matrix.hpp"
#include "persuaide/quotes.hpp"
#include "persuaide/sentiment.hpp"
#include "persuaide/substitute.hpp"
#include "persuaide/wordnet.hpp"

namespace persuaide {

enum class DirectionPolicy { input_modified, quote_modified, best_of_both };

inline std::optional<DirectionPolicy> direction_policy_from_string(
    const std::string& s) {
  if (s == "input_modified") return DirectionPolicy::input_modified;
  if (s == "quote_modified") return DirectionPolicy::quote_modified;
  if (s == "best_of_both") return DirectionPolicy::best_of_both;
  return std::nullopt;
}

struct PipelineConfig {
  std::string matrix_path;
  std::string wordnet_dir;
  std::string quote_index_path;
  std::string adjective_lexicon_path;
  std::string gazetteer_path;
  std::string embeddings_path;  // optional; required for embedding similarity

  ParserAdapterConfig parser_adapter;
  SimilarityConfig similarity;
  DirectionPolicy direction_policy = DirectionPolicy::input_modified;
  double min_similarity = 0.0;
  std::size_t max_insertions = 2;
  std::uint64_t seed = 0;
  bool sentiment = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::string resolve_path(const std::filesystem::path& base,
                                const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_absolute()) return p.string();
  return (base / p).lexically_normal().string();
}

inline void require_exists(const std::string& path, const std::string& key) {
  if (path.empty()) throw ConfigError("missing required config key '" + key + "'");
  if (!std::filesystem::exists(path))
    throw ConfigError("config key '" + key + "' points to nonexistent path: " +
                      path);
}

}  // namespace detail

// Flat key=value config, '#' comments. Relative paths resolve against
// the config file's directory. parser.command is whitespace-split unless
// given as a JSON array (for arguments containing spaces).
inline PipelineConfig load_pipeline_config(const std::string& config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + config_path);
  std::filesystem::path base =
      std::filesystem::path(config_path).parent_path();

  PipelineConfig cfg;
  std::string parser_kind;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(config_path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));

    auto as_u64 = [&](const std::string& v) {
      std::uint64_t out = 0;
      if (!detail::parse_u64(v, out))
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": '" + key + "' wants a nonnegative integer, got '" +
                          v + "'");
      return out;
    };

    if (key == "matrix_path") cfg.matrix_path = detail::resolve_path(base, value);
    else if (key == "wordnet_dir") cfg.wordnet_dir = detail::resolve_path(base, value);
    else if (key == "quote_index_path")
      cfg.quote_index_path = detail::resolve_path(base, value);
    else if (key == "adjective_lexicon_path")
      cfg.adjective_lexicon_path = detail::resolve_path(base, value);
    else if (key == "gazetteer_path")
      cfg.gazetteer_path = detail::resolve_path(base, value);
    else if (key == "embeddings_path")
      cfg.embeddings_path = detail::resolve_path(base, value);
    else if (key == "parser.kind") parser_kind = value;
    else if (key == "parser.command") {
      cfg.parser_adapter.command.clear();
      if (!value.empty() && value[0] == '[') {
        nlohmann::json arr = nlohmann::json::parse(value, nullptr, false);
        if (arr.is_discarded() || !arr.is_array())
          throw ConfigError(config_path + ":" + std::to_string(line_no) +
                            ": parser.command JSON array is malformed");
        for (const auto& item : arr)
          cfg.parser_adapter.command.push_back(item.get<std::string>());
      } else {
        std::istringstream ss(value);
        std::string tok;
        while (ss >> tok) cfg.parser_adapter.command.push_back(tok);
      }
      // A relative program path (with a slash) is config-relative;
      // bare names go through PATH.
      if (!cfg.parser_adapter.command.empty()) {
        std::string& prog = cfg.parser_adapter.command[0];
        if (prog.find('/') != std::string::npos &&
            !std::filesystem::path(prog).is_absolute())
          prog = detail::resolve_path(base, prog);
      }
    } else if (key == "parser.url") cfg.parser_adapter.url = value;
    else if (key == "parser.path")
      cfg.parser_adapter.path = detail::resolve_path(base, value);
    else if (key == "parser.timeout_ms")
      cfg.parser_adapter.timeout_ms = static_cast<int>(as_u64(value));
    else if (key == "similarity.method") {
      if (value == "tfidf") cfg.similarity.method = SimilarityConfig::Method::tfidf;
      else if (value == "embedding")
        cfg.similarity.method = SimilarityConfig::Method::embedding;
      else
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": similarity.method must be tfidf or embedding");
    } else if (key == "similarity.k") {
      cfg.similarity.k = static_cast<std::size_t>(as_u64(value));
      if (cfg.similarity.k == 0)
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": similarity.k must be positive");
    } else if (key == "direction_policy") {
      auto policy = direction_policy_from_string(value);
      if (!policy)
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": bad direction_policy '" + value + "'");
      cfg.direction_policy = *policy;
    } else if (key == "min_similarity") {
      try {
        cfg.min_similarity = std::stod(value);
      } catch (const std::exception&) {
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": min_similarity wants a real number");
      }
      if (cfg.min_similarity < 0.0 || cfg.min_similarity > 1.0)
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": min_similarity must be in [0, 1]");
    } else if (key == "max_insertions") {
      cfg.max_insertions = static_cast<std::size_t>(as_u64(value));
      if (cfg.max_insertions == 0)
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": max_insertions must be positive");
    } else if (key == "seed") cfg.seed = as_u64(value);
    else if (key == "sentiment") {
      if (value == "on") cfg.sentiment = true;
      else if (value == "off") cfg.sentiment = false;
      else
        throw ConfigError(config_path + ":" + std::to_string(line_no) +
                          ": sentiment must be on or off");
    } else {
      throw ConfigError(config_path + ":" + std::to_string(line_no) +
                        ": unknown config key '" + key + "'");
    }
  }

  if (parser_kind == "command") {
    cfg.parser_adapter.kind = ParserAdapterConfig::Kind::command;
    if (cfg.parser_adapter.command.empty())
      throw ConfigError(config_path + ": parser.kind=command needs parser.command");
  } else if (parser_kind == "http") {
    cfg.parser_adapter.kind = ParserAdapterConfig::Kind::http;
    if (cfg.parser_adapter.url.empty())
      throw ConfigError(config_path + ": parser.kind=http needs parser.url");
  } else if (parser_kind == "file") {
    cfg.parser_adapter.kind = ParserAdapterConfig::Kind::file;
    if (cfg.parser_adapter.path.empty())
      throw ConfigError(config_path + ": parser.kind=file needs parser.path");
    detail::require_exists(cfg.parser_adapter.path, "parser.path");
  } else if (parser_kind.empty()) {
    throw ConfigError(config_path + ": missing parser.kind");
  } else {
    throw ConfigError(config_path + ": parser.kind must be command, http or file");
  }

  detail::require_exists(cfg.matrix_path, "matrix_path");
  detail::require_exists(cfg.wordnet_dir, "wordnet_dir");
  detail::require_exists(cfg.quote_index_path, "quote_index_path");
  detail::require_exists(cfg.adjective_lexicon_path, "adjective_lexicon_path");
  detail::require_exists(cfg.gazetteer_path, "gazetteer_path");
  if (!cfg.embeddings_path.empty())
    detail::require_exists(cfg.embeddings_path, "embeddings_path");
  if (cfg.similarity.method == SimilarityConfig::Method::embedding &&
      cfg.embeddings_path.empty())
    throw ConfigError(config_path +
                      ": similarity.method=embedding needs embeddings_path");
  return cfg;
}

// ParserAdapterConfig from its JSON object form:
//   {"kind": "command"|"http"|"file", "command": [...], "url": ...,
//    "path": ..., "timeout_ms": 10000}
inline ParserAdapterConfig adapter_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("parser adapter JSON needs a \"kind\" field");
  ParserAdapterConfig cfg;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "command") {
    cfg.kind = ParserAdapterConfig::Kind::command;
    if (!j.contains("command") || !j.at("command").is_array() ||
        j.at("command").empty())
      throw ConfigError("command adapter needs a nonempty \"command\" array");
    for (const auto& item : j.at("command"))
      cfg.command.push_back(item.get<std::string>());
  } else if (kind == "http") {
    cfg.kind = ParserAdapterConfig::Kind::http;
    if (!j.contains("url"))
      throw ConfigError("http adapter needs a \"url\" field");
    cfg.url = j.at("url").get<std::string>();
  } else if (kind == "file") {
    cfg.kind = ParserAdapterConfig::Kind::file;
    if (!j.contains("path"))
      throw ConfigError("file adapter needs a \"path\" field");
    cfg.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("parser adapter kind must be command, http or file");
  }
  if (j.contains("timeout_ms"))
    cfg.timeout_ms = j.at("timeout_ms").get<int>();
  return cfg;
}

struct StageTimings {
  double parse_ms = 0;
  double retrieval_ms = 0;
  double substitution_ms = 0;
  double sentiment_ms = 0;
  double total_ms = 0;
};

struct TransformTrace {
  std::string input_text;
  ParsedSentence input_parse;
  std::vector<std::pair<std::size_t, double>> matched_quote_scores;  // (id, score)
  std::vector<std::string> matched_quote_texts;
  std::optional<SubstitutionResult::Direction> direction_used;
  std::vector<CandidatePair> candidate_table;
  std::optional<CandidatePair> chosen_pair;
  std::string substituted_text;
  std::vector<Insertion> insertions;
  std::string final_text;
  StageTimings timings;
};

namespace detail {

inline nlohmann::ordered_json candidate_to_json(const CandidatePair& row) {
  nlohmann::ordered_json j;
  j["w"] = {{"index", row.w.token.index},
            {"lemma", row.w.token.lemma},
            {"pos", pos_class_name(row.w.pos_class)}};
  j["k"] = {{"lemma", row.k.lemma}, {"pos", pos_class_name(row.k.pos_class)}};
  j["score"] = row.score;
  nlohmann::ordered_json contributions = nlohmann::ordered_json::array();
  for (const ScoreContribution& c : row.contributions)
    contributions.push_back({{"a", c.a}, {"b", c.b}, {"f", c.f}});
  j["contributions"] = std::move(contributions);
  return j;
}

}  // namespace detail

inline nlohmann::ordered_json trace_to_json(const TransformTrace& trace,
                                            bool with_timings = true) {
  nlohmann::ordered_json j;
  j["input_text"] = trace.input_text;
  nlohmann::ordered_json parse = nlohmann::ordered_json::array();
  for (const Token& t : trace.input_parse.tokens)
    parse.push_back({{"index", t.index},
                     {"surface", t.surface},
                     {"lemma", t.lemma},
                     {"upos", t.upos},
                     {"head", t.head},
                     {"deprel", t.deprel}});
  j["input_parse_summary"] = std::move(parse);
  nlohmann::ordered_json quotes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < trace.matched_quote_scores.size(); ++i)
    quotes.push_back({{"id", trace.matched_quote_scores[i].first},
                      {"text", trace.matched_quote_texts[i]},
                      {"score", trace.matched_quote_scores[i].second}});
  j["matched_quotes"] = std::move(quotes);
  if (trace.direction_used)
    j["direction_used"] = direction_name(*trace.direction_used);
  else
    j["direction_used"] = nullptr;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const CandidatePair& row : trace.candidate_table)
    table.push_back(detail::candidate_to_json(row));
  j["candidate_table"] = std::move(table);
  if (trace.chosen_pair)
    j["chosen_pair"] = detail::candidate_to_json(*trace.chosen_pair);
  else
    j["chosen_pair"] = nullptr;
  j["substituted_text"] = trace.substituted_text;
  nlohmann::ordered_json ins = nlohmann::ordered_json::array();
  for (const Insertion& i : trace.insertions)
    ins.push_back({{"noun_index", i.noun_index},
                   {"adjective", i.adjective},
                   {"insert_before_index", i.insert_before_index}});
  j["insertions"] = std::move(ins);
  j["final_text"] = trace.final_text;
  if (with_timings)
    j["timings"] = {{"parse_ms", trace.timings.parse_ms},
                    {"retrieval_ms", trace.timings.retrieval_ms},
                    {"substitution_ms", trace.timings.substitution_ms},
                    {"sentiment_ms", trace.timings.sentiment_ms},
                    {"total_ms", trace.timings.total_ms}};
  return j;
}

// A transform failure tagged with the pipeline stage it happened in.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message,
             bool adapter_failure)
      : std::runtime_error("[" + stage + "] " + message),
        stage_(std::move(stage)),
        adapter_failure_(adapter_failure) {}

  const std::string& stage() const noexcept { return stage_; }
  bool adapter_failure() const noexcept { return adapter_failure_; }

 private:
  std::string stage_;
  bool adapter_failure_;
};

// Owns all loaded resources; immutable after construction, so one
// instance can serve any number of transforms.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    matrix_ = load_matrix_file(cfg_.matrix_path);
    lexicon_ = load_wordnet(cfg_.wordnet_dir);
    quotes_ = load_quote_index(cfg_.quote_index_path);
    if (!cfg_.embeddings_path.empty())
      quotes_.set_embeddings(load_embeddings(cfg_.embeddings_path));
    adjectives_ = load_adjective_lexicon(cfg_.adjective_lexicon_path);
    gazetteer_ = load_gazetteer(cfg_.gazetteer_path);
  }

  const PipelineConfig& config() const { return cfg_; }
  const RelationCounts& matrix() const { return matrix_; }
  const WordNetLexicon& lexicon() const { return lexicon_; }
  const QuoteIndex& quote_index() const { return quotes_; }

  TransformTrace run_transform(const std::string& raw) const {
    auto t0 = std::chrono::steady_clock::now();
    ParsedSentence parse;
    try {
      parse = parse_external(raw, cfg_.parser_adapter);
    } catch (const AdapterError& e) {
      throw StageError("parse", e.what(), true);
    } catch (const ParseError& e) {
      throw StageError("parse", e.what(), false);
    }
    TransformTrace trace = transform_parsed(parse);
    trace.timings.parse_ms = elapsed_ms(t0) - trace.timings.total_ms;
    trace.timings.total_ms = elapsed_ms(t0);
    return trace;
  }

  TransformTrace run_transform(const ParsedSentence& parsed) const {
    return transform_parsed(parsed);
  }

  // One JSON trace per nonblank input line, in input order. A failing
  // line yields an error record instead of aborting the batch.
  void run_batch(std::istream& in, std::ostream& out,
                 bool with_timings = true) const {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        TransformTrace trace = run_transform(line);
        out << trace_to_json(trace, with_timings).dump() << "\n";
      } catch (const StageError& e) {
        nlohmann::ordered_json j;
        j["input_text"] = line;
        j["error"] = {{"stage", e.stage()}, {"message", std::string(e.what())}};
        out << j.dump() << "\n";
      }
    }
  }

 private:
  static double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }

  TransformTrace transform_parsed(const ParsedSentence& parse) const {
    auto t0 = std::chrono::steady_clock::now();
    TransformTrace trace;
    trace.input_text = parse.raw_text;
    trace.input_parse = parse;

    auto matches = top_match(parse, quotes_, cfg_.similarity);
    for (const auto& [record, score] : matches) {
      trace.matched_quote_scores.emplace_back(record->id, score);
      trace.matched_quote_texts.push_back(record->raw);
    }
    trace.timings.retrieval_ms = elapsed_ms(t0);

    if (matches.empty() || matches.front().second < cfg_.min_similarity) {
      trace.substituted_text = trace.input_text;
      trace.final_text = trace.input_text;
      trace.timings.total_ms = elapsed_ms(t0);
      return trace;
    }

    auto t1 = std::chrono::steady_clock::now();
    const QuoteRecord& quote = *matches.front().first;
    SubstitutionResult result = run_directions(parse, quote.parse);
    trace.direction_used = result.direction;
    trace.candidate_table = result.candidates;
    trace.chosen_pair = result.chosen;
    trace.substituted_text = result.output_text;
    trace.timings.substitution_ms = elapsed_ms(t1);

    if (cfg_.sentiment) {
      auto t2 = std::chrono::steady_clock::now();
      auto [text, insertions] =
          insert_adjectives(result.output_sentence, adjectives_, gazetteer_,
                            cfg_.max_insertions, cfg_.seed);
      trace.insertions = std::move(insertions);
      trace.final_text = text;
      trace.timings.sentiment_ms = elapsed_ms(t2);
    } else {
      trace.final_text = trace.substituted_text;
    }
    trace.timings.total_ms = elapsed_ms(t0);
    return trace;
  }

  SubstitutionResult run_directions(const ParsedSentence& input,
                                    const ParsedSentence& quote_parse) const {
    using Direction = SubstitutionResult::Direction;
    switch (cfg_.direction_policy) {
      case DirectionPolicy::input_modified:
        return transform_with_quote(input, quote_parse, matrix_, lexicon_,
                                    Direction::input_modified);
      case DirectionPolicy::quote_modified:
        return transform_with_quote(input, quote_parse, matrix_, lexicon_,
                                    Direction::quote_modified);
      case DirectionPolicy::best_of_both: {
        SubstitutionResult a = transform_with_quote(
            input, quote_parse, matrix_, lexicon_, Direction::input_modified);
        SubstitutionResult b = transform_with_quote(
            input, quote_parse, matrix_, lexicon_, Direction::quote_modified);
        double score_a = a.chosen ? a.chosen->score : -1.0;
        double score_b = b.chosen ? b.chosen->score : -1.0;
        return score_b > score_a ? std::move(b) : std::move(a);  // tie: input side
      }
    }
    throw ConfigError("unreachable direction policy");
  }

  PipelineConfig cfg_;
  RelationCounts matrix_;
  WordNetLexicon lexicon_;
  QuoteIndex quotes_;
  AdjectiveLexicon adjectives_;
  NounGazetteer gazetteer_;
};

}  // namespace persuaide

#endif  // PERSUAIDE_PIPELINE_HPP
