#ifndef PERSUAIDE_QUOTES_HPP
#define PERSUAIDE_QUOTES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "persuaide/adapter.hpp"
#include "persuaide/conllu.hpp"
#include "persuaide/errors.hpp"

namespace persuaide {

// One auxiliary expression (quotation, slogan, movie line) with its
// frozen parse. id is the 0-based position in the corpus.
struct QuoteRecord {
  std::size_t id = 0;
  std::string raw;
  ParsedSentence parse;
  std::vector<ContentWord> content;
};

struct SimilarityConfig {
  enum class Method { tfidf, embedding };
  Method method = Method::tfidf;
  std::size_t k = 3;
};

using EmbeddingTable = std::unordered_map<std::string, std::vector<double>>;

class QuoteIndex {
 public:
  const std::vector<QuoteRecord>& quotes() const { return quotes_; }
  std::size_t size() const { return quotes_.size(); }

  const std::map<std::string, std::size_t>& df() const { return df_; }
  std::size_t doc_frequency(const std::string& term) const {
    auto it = df_.find(term);
    return it == df_.end() ? 0 : it->second;
  }

  const EmbeddingTable& embeddings() const { return embeddings_; }
  bool has_embeddings() const { return !embeddings_.empty(); }
  void set_embeddings(EmbeddingTable table) { embeddings_ = std::move(table); }

  void add(QuoteRecord record) {
    std::map<std::string, bool> seen;
    for (const ContentWord& w : record.content) {
      if (!seen.count(w.token.lemma)) {
        seen[w.token.lemma] = true;
        ++df_[w.token.lemma];
      }
    }
    quotes_.push_back(std::move(record));
  }

 private:
  std::vector<QuoteRecord> quotes_;
  std::map<std::string, std::size_t> df_;
  EmbeddingTable embeddings_;
};

// Parses each nonblank line through the adapter. Duplicate lines get
// distinct ids; adapter failures are annotated with the 1-based source
// line number.
template <typename LineRange>
QuoteIndex index_quotes(const LineRange& lines,
                        const ParserAdapterConfig& adapter) {
  QuoteIndex index;
  std::size_t line_no = 0;
  for (const std::string& line : lines) {
    ++line_no;
    if (line.empty()) continue;
    QuoteRecord record;
    record.id = index.size();
    record.raw = line;
    try {
      record.parse = parse_external(line, adapter);
    } catch (const AdapterError& e) {
      throw AdapterError("quote line " + std::to_string(line_no) + ": " +
                             e.what(),
                         e.diagnostic());
    }
    record.content = content_words(record.parse);
    index.add(std::move(record));
  }
  return index;
}

namespace detail {

inline double cosine(const std::map<std::string, double>& x,
                     const std::map<std::string, double>& y) {
  double dot = 0, nx = 0, ny = 0;
  for (const auto& [term, v] : x) {
    nx += v * v;
    auto it = y.find(term);
    if (it != y.end()) dot += v * it->second;
  }
  for (const auto& [term, v] : y) ny += v * v;
  if (nx == 0 || ny == 0) return 0.0;
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

// tf = raw count over content lemmas; idf = ln((1+N)/(1+df)) + 1.
inline std::map<std::string, double> tfidf_vector(
    const std::vector<ContentWord>& words, const QuoteIndex& idx) {
  std::map<std::string, double> tf;
  for (const ContentWord& w : words) tf[w.token.lemma] += 1.0;
  double n = static_cast<double>(idx.size());
  for (auto& [term, value] : tf) {
    double df = static_cast<double>(idx.doc_frequency(term));
    value *= std::log((1.0 + n) / (1.0 + df)) + 1.0;
  }
  return tf;
}

// Mean embedding of in-vocabulary content words; lookup prefers the
// lemma, then the lowercased surface.
inline std::vector<double> mean_embedding(const std::vector<ContentWord>& words,
                                          const EmbeddingTable& table) {
  std::vector<double> sum;
  std::size_t found = 0;
  for (const ContentWord& w : words) {
    auto it = table.find(w.token.lemma);
    if (it == table.end()) it = table.find(lowercase(w.token.surface));
    if (it == table.end()) continue;
    if (sum.empty()) sum.assign(it->second.size(), 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += it->second[i];
    ++found;
  }
  if (found > 0)
    for (double& v : sum) v /= static_cast<double>(found);
  return sum;
}

inline double cosine_dense(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.empty() || y.empty() || x.size() != y.size()) return 0.0;
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0 || ny == 0) return 0.0;
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

}  // namespace detail

// Similarity in [0, 1] between the query sentence and one quote. The
// embedding method clamps negative cosines to 0.
inline double similarity(const ParsedSentence& query, const QuoteRecord& q,
                         const QuoteIndex& idx, const SimilarityConfig& cfg) {
  std::vector<ContentWord> query_words = content_words(query);
  if (cfg.method == SimilarityConfig::Method::tfidf) {
    return detail::cosine(detail::tfidf_vector(query_words, idx),
                          detail::tfidf_vector(q.content, idx));
  }
  if (!idx.has_embeddings())
    throw ConfigError("embedding similarity requested but no embeddings loaded");
  double score = detail::cosine_dense(
      detail::mean_embedding(query_words, idx.embeddings()),
      detail::mean_embedding(q.content, idx.embeddings()));
  return score < 0.0 ? 0.0 : score;
}

// Top-k quotes by similarity, descending; ties broken by ascending id.
inline std::vector<std::pair<const QuoteRecord*, double>> top_match(
    const ParsedSentence& query, const QuoteIndex& idx,
    const SimilarityConfig& cfg) {
  std::vector<std::pair<const QuoteRecord*, double>> scored;
  scored.reserve(idx.size());
  for (const QuoteRecord& q : idx.quotes())
    scored.emplace_back(&q, similarity(query, q, idx, cfg));
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first->id < b.first->id;
                   });
  if (scored.size() > cfg.k) scored.resize(cfg.k);
  return scored;
}

// Embedding file: one entry per line, "term v1 v2 ... vd"; an optional
// "count dim" first line is auto-detected by token count.
inline EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open", 0);
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (first) {
      first = false;
      if (tokens.size() == 2) {
        std::uint64_t a, b;
        if (detail::parse_u64(tokens[0], a) && detail::parse_u64(tokens[1], b))
          continue;  // "count dim" header
      }
    }
    if (tokens.size() < 2)
      throw FormatError(path, "entry needs a term and at least one value",
                        line_no);
    std::vector<double> vec;
    vec.reserve(tokens.size() - 1);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      try {
        std::size_t used = 0;
        double v = std::stod(tokens[i], &used);
        if (used != tokens[i].size()) throw std::invalid_argument("trailing");
        vec.push_back(v);
      } catch (const std::exception&) {
        throw FormatError(path, "non-numeric value '" + tokens[i] + "'",
                          line_no);
      }
    }
    if (dim == 0)
      dim = vec.size();
    else if (vec.size() != dim)
      throw FormatError(path, "dimension mismatch: expected " +
                                  std::to_string(dim) + ", got " +
                                  std::to_string(vec.size()),
                        line_no);
    table[tokens[0]] = std::move(vec);
  }
  return table;
}

// Index persistence: a directory holding quotes.txt (one quote per
// line), quotes.conllu (frozen parses, one block per quote, in order)
// and stats.tsv (term<TAB>df, sorted).
inline void save_quote_index(const QuoteIndex& idx, const std::string& dir) {
  {
    std::ofstream out(dir + "/quotes.txt", std::ios::binary);
    if (!out) throw FormatError(dir + "/quotes.txt", "cannot open for writing", 0);
    for (const QuoteRecord& q : idx.quotes()) out << q.raw << "\n";
  }
  {
    std::ofstream out(dir + "/quotes.conllu", std::ios::binary);
    if (!out)
      throw FormatError(dir + "/quotes.conllu", "cannot open for writing", 0);
    for (const QuoteRecord& q : idx.quotes()) {
      out << "# text = " << q.parse.raw_text << "\n";
      for (const Token& t : q.parse.tokens)
        out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t'
            << t.upos << "\t_\t_\t" << t.head << '\t' << t.deprel
            << "\t_\t_\n";
      out << "\n";
    }
  }
  {
    std::ofstream out(dir + "/stats.tsv", std::ios::binary);
    if (!out) throw FormatError(dir + "/stats.tsv", "cannot open for writing", 0);
    for (const auto& [term, df] : idx.df()) out << term << '\t' << df << "\n";
  }
}

inline QuoteIndex load_quote_index(const std::string& dir) {
  std::vector<std::string> raws;
  {
    std::ifstream in(dir + "/quotes.txt", std::ios::binary);
    if (!in) throw FormatError(dir + "/quotes.txt", "cannot open", 0);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty())
        throw FormatError(dir + "/quotes.txt", "blank quote line", line_no);
      raws.push_back(line);
    }
  }
  std::vector<ParsedSentence> parses;
  {
    std::ifstream in(dir + "/quotes.conllu", std::ios::binary);
    if (!in) throw FormatError(dir + "/quotes.conllu", "cannot open", 0);
    try {
      parses = parse_conllu(in);
    } catch (const ParseError& e) {
      throw FormatError(dir + "/quotes.conllu", e.what(), e.line());
    }
  }
  if (parses.size() != raws.size())
    throw FormatError(dir + "/quotes.conllu",
                      "quote count mismatch: quotes.txt has " +
                          std::to_string(raws.size()) + " lines, parses: " +
                          std::to_string(parses.size()),
                      0);
  QuoteIndex idx;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    QuoteRecord record;
    record.id = i;
    record.raw = raws[i];
    record.parse = std::move(parses[i]);
    record.content = content_words(record.parse);
    idx.add(std::move(record));
  }
  // stats.tsv is redundant with the parses; verify rather than trust.
  {
    std::ifstream in(dir + "/stats.tsv", std::ios::binary);
    if (!in) throw FormatError(dir + "/stats.tsv", "cannot open", 0);
    std::map<std::string, std::size_t> declared;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::size_t tab = line.find('\t');
      if (tab == std::string::npos)
        throw FormatError(dir + "/stats.tsv", "expected term<TAB>df", line_no);
      std::uint64_t df = 0;
      if (!detail::parse_u64(line.substr(tab + 1), df))
        throw FormatError(dir + "/stats.tsv", "non-integer df", line_no);
      declared[line.substr(0, tab)] = static_cast<std::size_t>(df);
    }
    if (declared != idx.df())
      throw FormatError(dir + "/stats.tsv",
                        "document frequencies do not match quotes.conllu", 0);
  }
  return idx;
}

}  // namespace persuaide

#endif  // PERSUAIDE_QUOTES_HPP
