#ifndef PERSUAIDE_MATRIX_HPP
#define PERSUAIDE_MATRIX_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "persuaide/conllu.hpp"
#include "persuaide/errors.hpp"

namespace persuaide {

struct MatrixStats {
  std::uint64_t vocab = 0;
  std::uint64_t relation_pairs = 0;
  std::uint64_t total_edges = 0;
  std::uint64_t sentences = 0;

  bool operator==(const MatrixStats&) const = default;
};

namespace detail {

struct LemmaPairHash {
  std::size_t operator()(const std::pair<std::string, std::string>& p) const {
    std::size_t h1 = std::hash<std::string>{}(p.first);
    std::size_t h2 = std::hash<std::string>{}(p.second);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

}  // namespace detail

// Sparse frequency map over (head lemma, dependent lemma) pairs.
// Stored counts are always >= 1; absent pairs read as 0.
class RelationCounts {
 public:
  using Key = std::pair<std::string, std::string>;
  using Map = std::unordered_map<Key, std::uint64_t, detail::LemmaPairHash>;

  const Map& counts() const { return counts_; }
  const std::unordered_set<std::string>& vocabulary() const { return vocab_; }

  MatrixStats stats() const {
    MatrixStats s;
    s.vocab = vocab_.size();
    s.relation_pairs = counts_.size();
    s.total_edges = total_edges_;
    s.sentences = sentences_;
    return s;
  }

  std::uint64_t lookup(const std::string& head_lemma,
                       const std::string& dep_lemma) const {
    auto it = counts_.find(Key{head_lemma, dep_lemma});
    return it == counts_.end() ? 0 : it->second;
  }

  void add(const std::string& head_lemma, const std::string& dep_lemma,
           std::uint64_t n = 1) {
    if (n == 0) return;
    counts_[Key{head_lemma, dep_lemma}] += n;
    total_edges_ += n;
    vocab_.insert(head_lemma);
    vocab_.insert(dep_lemma);
  }

  void add_sentences(std::uint64_t n) { sentences_ += n; }

  bool operator==(const RelationCounts& other) const {
    return counts_ == other.counts_ && sentences_ == other.sentences_;
  }

 private:
  Map counts_;
  std::unordered_set<std::string> vocab_;
  std::uint64_t total_edges_ = 0;
  std::uint64_t sentences_ = 0;
};

// Counts every head->dependent edge of the corpus, keyed by lemma pair.
// Edges labelled punct and the root pseudo-edge (head 0) are excluded;
// relation labels are otherwise dropped.
template <typename SentenceRange>
RelationCounts build_matrix(const SentenceRange& corpus) {
  RelationCounts m;
  for (const ParsedSentence& s : corpus) {
    for (const Token& t : s.tokens) {
      if (t.head == 0) continue;
      if (detail::deprel_base(t.deprel) == "punct") continue;
      m.add(s.tokens[t.head - 1].lemma, t.lemma);
    }
    m.add_sentences(1);
  }
  return m;
}

// Pointwise sum; associative and commutative, so sharded builds can be
// combined in any order.
inline RelationCounts merge(const RelationCounts& x, const RelationCounts& y) {
  RelationCounts out = x;
  for (const auto& [key, count] : y.counts()) out.add(key.first, key.second, count);
  out.add_sentences(y.stats().sentences);
  return out;
}

inline std::uint64_t lookup_f(const RelationCounts& m, const std::string& a,
                              const std::string& b) {
  return m.lookup(a, b);
}

// Matrix file format, UTF-8 text:
//   #persuaide-matrix v1 \t vocab=N \t pairs=N \t edges=N \t sentences=N
//   a \t b \t count          (sorted lexicographically by (a, b))
// Output is byte-deterministic.
inline void save_matrix(const RelationCounts& m, std::ostream& out) {
  MatrixStats s = m.stats();
  out << "#persuaide-matrix v1\tvocab=" << s.vocab << "\tpairs="
      << s.relation_pairs << "\tedges=" << s.total_edges << "\tsentences="
      << s.sentences << "\n";
  std::map<RelationCounts::Key, std::uint64_t> sorted(m.counts().begin(),
                                                      m.counts().end());
  for (const auto& [key, count] : sorted)
    out << key.first << '\t' << key.second << '\t' << count << "\n";
}

inline void save_matrix(const RelationCounts& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path, "cannot open for writing", 0);
  save_matrix(m, out);
  if (!out) throw FormatError(path, "write failed", 0);
}

namespace detail {

inline std::uint64_t parse_header_field(const std::string& field,
                                        const std::string& key,
                                        const std::string& source) {
  if (field.size() <= key.size() ||
      field.compare(0, key.size(), key) != 0 || field[key.size()] != '=')
    throw FormatError(source, "bad header field '" + field + "', expected " +
                                  key + "=<n>",
                      1);
  std::uint64_t value = 0;
  for (std::size_t i = key.size() + 1; i < field.size(); ++i) {
    char c = field[i];
    if (c < '0' || c > '9')
      throw FormatError(source, "non-integer value in header field '" + field +
                                    "'",
                        1);
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

}  // namespace detail

inline RelationCounts load_matrix(std::istream& in,
                                  const std::string& source = "<matrix>") {
  std::string line;
  if (!std::getline(in, line))
    throw FormatError(source, "empty file, expected header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = detail::split_tabs(line);
  if (header.size() != 5 || header[0] != "#persuaide-matrix v1")
    throw FormatError(source, "bad header, expected '#persuaide-matrix v1'", 1);
  MatrixStats declared;
  declared.vocab = detail::parse_header_field(header[1], "vocab", source);
  declared.relation_pairs = detail::parse_header_field(header[2], "pairs", source);
  declared.total_edges = detail::parse_header_field(header[3], "edges", source);
  declared.sentences = detail::parse_header_field(header[4], "sentences", source);

  RelationCounts m;
  m.add_sentences(declared.sentences);
  RelationCounts::Key prev;
  bool have_prev = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty())
      throw FormatError(source, "blank line in matrix body", line_no);
    std::vector<std::string> cols = detail::split_tabs(line);
    if (cols.size() != 3)
      throw FormatError(source, "expected 3 tab-separated fields, got " +
                                    std::to_string(cols.size()),
                        line_no);
    std::uint64_t count = 0;
    if (cols[2].empty())
      throw FormatError(source, "empty count", line_no);
    for (char c : cols[2]) {
      if (c < '0' || c > '9')
        throw FormatError(source, "non-integer count '" + cols[2] + "'",
                          line_no);
      count = count * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (count == 0)
      throw FormatError(source, "zero count not allowed", line_no);
    RelationCounts::Key key{cols[0], cols[1]};
    if (have_prev) {
      if (key == prev)
        throw FormatError(source, "duplicate pair '" + cols[0] + "\\t" +
                                      cols[1] + "'",
                          line_no);
      if (key < prev)
        throw FormatError(source, "pairs not sorted", line_no);
    }
    m.add(cols[0], cols[1], count);
    prev = std::move(key);
    have_prev = true;
  }

  MatrixStats got = m.stats();
  if (got.relation_pairs != declared.relation_pairs)
    throw FormatError(source, "header declares " +
                                  std::to_string(declared.relation_pairs) +
                                  " pairs, file has " +
                                  std::to_string(got.relation_pairs),
                      1);
  if (got.total_edges != declared.total_edges)
    throw FormatError(source, "header declares " +
                                  std::to_string(declared.total_edges) +
                                  " edges, file sums to " +
                                  std::to_string(got.total_edges),
                      1);
  if (got.vocab != declared.vocab)
    throw FormatError(source, "header declares vocab " +
                                  std::to_string(declared.vocab) +
                                  ", file has " + std::to_string(got.vocab),
                      1);
  return m;
}

inline RelationCounts load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open", 0);
  return load_matrix(in, path);
}

}  // namespace persuaide

#endif  // PERSUAIDE_MATRIX_HPP
