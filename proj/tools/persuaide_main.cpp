// persuaide command-line front end.
//
// Subcommands:
//   build-matrix  count dependency-relation frequencies from CoNLL-U files
//   index-quotes  parse a quote corpus and persist the retrieval index
//   transform     run the full transformation pipeline on one sentence
//   batch         transform every line of a file, one JSON trace per line
//   score         print the matching-score breakdown for one candidate
//
// Exit codes: 0 success, 1 usage error, 2 resource/format error,
// 3 parser-adapter error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "persuaide/pipeline.hpp"

namespace fs = std::filesystem;
using namespace persuaide;

namespace {

std::vector<std::string> collect_conllu_files(
    const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const std::string& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(input))
        if (entry.is_regular_file() && entry.path().extension() == ".conllu")
          found.push_back(entry.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  return files;
}

int run_build_matrix(const std::vector<std::string>& corpus,
                     const std::string& out_path) {
  std::vector<std::string> files = collect_conllu_files(corpus);
  if (files.empty()) {
    std::cerr << "build-matrix: no .conllu inputs found\n";
    return 2;
  }
  RelationCounts matrix;
  for (const std::string& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      std::cerr << "build-matrix: cannot open " << file << "\n";
      return 2;
    }
    try {
      matrix = merge(matrix, build_matrix(parse_conllu(in)));
    } catch (const ParseError& e) {
      std::cerr << "build-matrix: " << file << ": " << e.what() << "\n";
      return 2;
    }
  }
  save_matrix(matrix, out_path);
  MatrixStats s = matrix.stats();
  std::cerr << "wrote " << out_path << ": vocab=" << s.vocab << " pairs="
            << s.relation_pairs << " edges=" << s.total_edges << " sentences="
            << s.sentences << "\n";
  return 0;
}

int run_index_quotes(const std::string& quotes_path, const std::string& out_dir,
                     const std::string& parser_json,
                     const std::string& config_path) {
  ParserAdapterConfig adapter;
  if (!parser_json.empty()) {
    nlohmann::json j = nlohmann::json::parse(parser_json, nullptr, false);
    if (j.is_discarded()) {
      std::cerr << "index-quotes: --parser is not valid JSON\n";
      return 1;
    }
    adapter = adapter_from_json(j);
  } else if (!config_path.empty()) {
    adapter = load_pipeline_config(config_path).parser_adapter;
  } else {
    std::cerr << "index-quotes: need --parser or --config\n";
    return 1;
  }

  std::ifstream in(quotes_path, std::ios::binary);
  if (!in) {
    std::cerr << "index-quotes: cannot open " << quotes_path << "\n";
    return 2;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  QuoteIndex index = index_quotes(lines, adapter);
  fs::create_directories(out_dir);
  save_quote_index(index, out_dir);
  std::cerr << "indexed " << index.size() << " quotes into " << out_dir << "\n";
  return 0;
}

void apply_overrides(PipelineConfig& cfg, bool no_sentiment,
                     const std::string& direction, std::uint64_t seed,
                     bool seed_set, std::size_t top_k) {
  if (no_sentiment) cfg.sentiment = false;
  if (seed_set) cfg.seed = seed;
  if (top_k > 0) cfg.similarity.k = top_k;
  if (!direction.empty()) {
    auto policy = direction_policy_from_string(direction);
    if (!policy)
      throw ConfigError("bad --direction '" + direction +
                        "', want input_modified, quote_modified or best_of_both");
    cfg.direction_policy = *policy;
  }
}

void print_human_trace(const TransformTrace& trace) {
  std::cout << "input:       " << trace.input_text << "\n";
  if (!trace.matched_quote_texts.empty())
    std::cout << "quote:       " << trace.matched_quote_texts.front()
              << "  (score " << trace.matched_quote_scores.front().second
              << ")\n";
  else
    std::cout << "quote:       (none)\n";
  if (trace.chosen_pair)
    std::cout << "chosen:      " << trace.chosen_pair->w.token.lemma << " -> "
              << trace.chosen_pair->k.lemma << "  (score "
              << trace.chosen_pair->score << ")\n";
  else
    std::cout << "chosen:      (no substitution)\n";
  std::cout << "substituted: " << trace.substituted_text << "\n";
  std::cout << "final:       " << trace.final_text << "\n";
}

int run_transform(const std::string& config_path, const std::string& text,
                  const std::string& conllu_path, bool json, bool no_timings,
                  bool no_sentiment, const std::string& direction,
                  std::uint64_t seed, bool seed_set, std::size_t top_k) {
  PipelineConfig cfg = load_pipeline_config(config_path);
  apply_overrides(cfg, no_sentiment, direction, seed, seed_set, top_k);
  Pipeline pipeline(cfg);

  TransformTrace trace;
  if (!conllu_path.empty()) {
    std::ifstream in(conllu_path, std::ios::binary);
    if (!in) {
      std::cerr << "transform: cannot open " << conllu_path << "\n";
      return 2;
    }
    std::vector<ParsedSentence> sentences = parse_conllu(in);
    if (sentences.empty()) {
      std::cerr << "transform: " << conllu_path << " contains no sentences\n";
      return 2;
    }
    trace = pipeline.run_transform(sentences.front());
  } else {
    trace = pipeline.run_transform(text);
  }

  if (json)
    std::cout << trace_to_json(trace, !no_timings).dump(2) << "\n";
  else
    print_human_trace(trace);
  return 0;
}

int run_batch(const std::string& config_path, const std::string& input_path,
              const std::string& out_path, bool no_timings, bool no_sentiment,
              const std::string& direction, std::uint64_t seed, bool seed_set,
              std::size_t top_k) {
  PipelineConfig cfg = load_pipeline_config(config_path);
  apply_overrides(cfg, no_sentiment, direction, seed, seed_set, top_k);
  Pipeline pipeline(cfg);

  std::ifstream in(input_path, std::ios::binary);
  if (!in) {
    std::cerr << "batch: cannot open " << input_path << "\n";
    return 2;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "batch: cannot open " << out_path << " for writing\n";
    return 2;
  }
  pipeline.run_batch(in, out, !no_timings);
  return 0;
}

int run_score(const std::string& matrix_path, const std::string& conllu_path,
              int word_index, const std::string& candidate) {
  RelationCounts matrix = load_matrix_file(matrix_path);
  std::ifstream in(conllu_path, std::ios::binary);
  if (!in) {
    std::cerr << "score: cannot open " << conllu_path << "\n";
    return 2;
  }
  std::vector<ParsedSentence> sentences = parse_conllu(in);
  if (sentences.empty()) {
    std::cerr << "score: " << conllu_path << " contains no sentences\n";
    return 2;
  }
  const ParsedSentence& sentence = sentences.front();
  if (word_index < 1 || word_index > static_cast<int>(sentence.tokens.size())) {
    std::cerr << "score: --word " << word_index << " out of range 1.."
              << sentence.tokens.size() << "\n";
    return 1;
  }
  const Token& word = sentence.tokens[word_index - 1];
  RelationContext ctx = relations_containing(sentence, word);
  std::vector<ScoreContribution> contributions;
  double score = matching_score(matrix, ctx, candidate, &contributions);

  nlohmann::ordered_json j;
  j["word"] = {{"index", word.index},
               {"surface", word.surface},
               {"lemma", word.lemma},
               {"upos", word.upos}};
  j["candidate"] = candidate;
  nlohmann::ordered_json relations = nlohmann::ordered_json::array();
  for (const auto& r : ctx.relations)
    relations.push_back(
        {{"role", r.role == RelationContext::Role::child_of ? "child_of"
                                                            : "parent_of"},
         {"other_lemma", r.other_lemma}});
  j["relations"] = std::move(relations);
  nlohmann::ordered_json contribs = nlohmann::ordered_json::array();
  for (const ScoreContribution& c : contributions)
    contribs.push_back({{"a", c.a}, {"b", c.b}, {"f", c.f}});
  j["contributions"] = std::move(contribs);
  j["score"] = score;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"persuaide: persuasive rewriting of product descriptions"};
  app.require_subcommand(1);

  // build-matrix
  auto* build = app.add_subcommand(
      "build-matrix", "Count dependency-relation frequencies from CoNLL-U");
  std::vector<std::string> corpus;
  std::string build_out;
  build->add_option("--corpus", corpus, ".conllu files or directories")
      ->required()
      ->expected(-1);
  build->add_option("--out", build_out, "output matrix path")->required();

  // index-quotes
  auto* index = app.add_subcommand("index-quotes",
                                   "Parse and index a quote corpus");
  std::string quotes_path, index_out, parser_json, index_config;
  index->add_option("--quotes", quotes_path, "quote corpus, one per line")
      ->required();
  index->add_option("--out", index_out, "output index directory")->required();
  index->add_option("--parser", parser_json,
                    "parser adapter as JSON, e.g. "
                    "{\"kind\":\"command\",\"command\":[\"...\"]}");
  index->add_option("--config", index_config,
                    "pipeline config to borrow the parser adapter from");

  // transform
  auto* transform = app.add_subcommand("transform",
                                       "Transform a single sentence");
  std::string t_config, t_text, t_conllu, t_direction;
  bool t_json = false, t_no_timings = false, t_no_sentiment = false;
  std::uint64_t t_seed = 0;
  std::size_t t_top_k = 0;
  transform->add_option("--config", t_config, "pipeline config file")
      ->required();
  auto* opt_text = transform->add_option("--text", t_text, "raw sentence");
  transform->add_option("--conllu", t_conllu, "pre-parsed sentence file")
      ->excludes(opt_text);
  transform->add_flag("--json", t_json, "print the full JSON trace");
  transform->add_flag("--no-timings", t_no_timings,
                      "omit stage timings from the trace");
  transform->add_flag("--no-sentiment", t_no_sentiment,
                      "skip adjective insertion");
  transform->add_option("--direction", t_direction,
                        "input_modified | quote_modified | best_of_both");
  auto* opt_seed = transform->add_option("--seed", t_seed,
                                         "adjective-choice seed");
  transform->add_option("--top-k", t_top_k, "quotes to rank in the trace");

  // batch
  auto* batch = app.add_subcommand("batch",
                                   "Transform every line of a file");
  std::string b_config, b_input, b_out, b_direction;
  bool b_no_timings = false, b_no_sentiment = false;
  std::uint64_t b_seed = 0;
  std::size_t b_top_k = 0;
  batch->add_option("--config", b_config, "pipeline config file")->required();
  batch->add_option("--input", b_input, "input sentences, one per line")
      ->required();
  batch->add_option("--out", b_out, "output JSONL path")->required();
  batch->add_flag("--no-timings", b_no_timings,
                  "omit stage timings from traces");
  batch->add_flag("--no-sentiment", b_no_sentiment, "skip adjective insertion");
  batch->add_option("--direction", b_direction,
                    "input_modified | quote_modified | best_of_both");
  auto* opt_bseed = batch->add_option("--seed", b_seed,
                                      "adjective-choice seed");
  batch->add_option("--top-k", b_top_k, "quotes to rank per trace");

  // score
  auto* score = app.add_subcommand(
      "score", "Matching-score breakdown for one candidate word");
  std::string s_matrix, s_conllu, s_candidate;
  int s_word = 0;
  score->add_option("--matrix", s_matrix, "matrix file")->required();
  score->add_option("--conllu", s_conllu, "sentence file")->required();
  score->add_option("--word", s_word, "1-based token index")->required();
  score->add_option("--candidate", s_candidate, "candidate lemma")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (build->parsed()) return run_build_matrix(corpus, build_out);
    if (index->parsed())
      return run_index_quotes(quotes_path, index_out, parser_json,
                              index_config);
    if (transform->parsed()) {
      if (t_text.empty() && t_conllu.empty()) {
        std::cerr << "transform: need --text or --conllu\n";
        return 1;
      }
      return run_transform(t_config, t_text, t_conllu, t_json, t_no_timings,
                           t_no_sentiment, t_direction, t_seed,
                           opt_seed->count() > 0, t_top_k);
    }
    if (batch->parsed())
      return run_batch(b_config, b_input, b_out, b_no_timings, b_no_sentiment,
                       b_direction, b_seed, opt_bseed->count() > 0, b_top_k);
    if (score->parsed())
      return run_score(s_matrix, s_conllu, s_word, s_candidate);
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.adapter_failure() ? 3 : 2;
  } catch (const AdapterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
