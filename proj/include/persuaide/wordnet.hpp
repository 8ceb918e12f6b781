#ifndef PERSUAIDE_WORDNET_HPP
#define PERSUAIDE_WORDNET_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "persuaide/conllu.hpp"
#include "persuaide/errors.hpp"

namespace persuaide {

// A lemma plus its four-way POS classification, the unit the substitution
// buckets are made of.
struct DerivedForm {
  std::string lemma;
  PosClass pos_class = PosClass::noun;

  auto operator<=>(const DerivedForm&) const = default;
};

struct PosBuckets {
  std::vector<DerivedForm> nouns;
  std::vector<DerivedForm> verbs;
  std::vector<DerivedForm> adjectives;
  std::vector<DerivedForm> adverbs;
};

namespace wndb {

// Database POS letters; adjective satellites ('s') normalize to 'a'.
inline char normalize_pos(char p) { return p == 's' ? 'a' : p; }

inline char pos_letter(PosClass c) {
  switch (c) {
    case PosClass::noun: return 'n';
    case PosClass::verb: return 'v';
    case PosClass::adjective: return 'a';
    case PosClass::adverb: return 'r';
  }
  return 'n';
}

inline PosClass pos_class_of_letter(char p) {
  switch (normalize_pos(p)) {
    case 'n': return PosClass::noun;
    case 'v': return PosClass::verb;
    case 'a': return PosClass::adjective;
    case 'r': return PosClass::adverb;
  }
  return PosClass::noun;
}

struct Pointer {
  std::string symbol;
  std::uint64_t target_offset = 0;
  char target_pos = 'n';
  int source_word = 0;  // 1-based; 0 = semantic pointer
  int target_word = 0;
};

struct Synset {
  std::uint64_t offset = 0;
  char pos = 'n';  // normalized
  std::vector<std::string> words;
  std::vector<Pointer> pointers;
  std::size_t byte_offset = 0;  // line start in the source file
};

using persuaide::detail::parse_u64;

inline bool parse_hex(const std::string& s, std::uint64_t& out) {
  if (s.empty()) return false;
  out = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else return false;
    out = out * 16 + static_cast<std::uint64_t>(d);
  }
  return true;
}

inline std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Adjective words may carry a syntactic marker suffix: "galore(ip)".
inline std::string strip_adj_marker(const std::string& word) {
  if (!word.empty() && word.back() == ')') {
    std::size_t open = word.rfind('(');
    if (open != std::string::npos && open > 0) return word.substr(0, open);
  }
  return word;
}

}  // namespace wndb

// WordNet 3.0 database files, loaded for one purpose: answering
// derivationally-related-form queries. entries come from the index.*
// files, derivational links from the '+' lexical pointers in data.*.
class WordNetLexicon {
 public:
  using EntryKey = std::pair<std::string, char>;  // (lemma, pos letter)
  using LinkKey = std::tuple<std::string, char, std::uint64_t>;
  using Target = std::tuple<std::string, char, std::uint64_t>;

  const std::map<EntryKey, std::vector<std::uint64_t>>& entries() const {
    return entries_;
  }
  const std::map<LinkKey, std::set<Target>>& deriv_links() const {
    return deriv_links_;
  }

  bool has_entry(const std::string& lemma, char pos) const {
    return entries_.count(EntryKey{lemma, wndb::normalize_pos(pos)}) > 0;
  }

  const std::vector<std::uint64_t>* synsets(const std::string& lemma,
                                            char pos) const {
    auto it = entries_.find(EntryKey{lemma, wndb::normalize_pos(pos)});
    return it == entries_.end() ? nullptr : &it->second;
  }

  void add_entry(const std::string& lemma, char pos,
                 std::vector<std::uint64_t> offsets) {
    entries_[EntryKey{lemma, pos}] = std::move(offsets);
  }

  void add_link(const std::string& lemma, char pos, std::uint64_t offset,
                Target target) {
    deriv_links_[LinkKey{lemma, pos, offset}].insert(std::move(target));
  }

 private:
  std::map<EntryKey, std::vector<std::uint64_t>> entries_;
  std::map<LinkKey, std::set<Target>> deriv_links_;
};

namespace wndb {

// data.pos line layout:
//   offset lex_filenum ss_type w_cnt (word lex_id)+ p_cnt (ptr)* ... | gloss
// w_cnt and lex_id are hex; p_cnt is decimal; a pointer is
//   symbol offset pos source/target
// with source/target as four hex digits (source word, target word).
// Everything between the pointers and '|' (verb frames) is ignored.
inline void read_data_file(const std::string& path, char file_pos,
                           std::map<std::uint64_t, Synset>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open", 0);
  std::string line;
  std::size_t byte_pos = 0;
  while (std::getline(in, line)) {
    std::size_t line_start = byte_pos;
    byte_pos += line.size() + 1;
    if (line.empty() || line[0] == ' ') continue;  // license header

    std::string body = line;
    std::size_t bar = body.find(" | ");
    if (bar != std::string::npos) body = body.substr(0, bar);
    std::vector<std::string> t = split_spaces(body);
    if (t.size() < 5)
      throw FormatError(path, "truncated synset line", line_start);

    Synset s;
    s.byte_offset = line_start;
    if (!parse_u64(t[0], s.offset))
      throw FormatError(path, "malformed synset offset '" + t[0] + "'",
                        line_start);
    char ss_type = t[2].size() == 1 ? t[2][0] : '?';
    if (normalize_pos(ss_type) != file_pos)
      throw FormatError(path, "synset type '" + t[2] +
                                  "' does not belong in this file",
                        line_start);
    s.pos = normalize_pos(ss_type);

    std::uint64_t w_cnt = 0;
    if (!parse_hex(t[3], w_cnt) || w_cnt == 0)
      throw FormatError(path, "bad word count '" + t[3] + "'", line_start);
    std::size_t i = 4;
    for (std::uint64_t w = 0; w < w_cnt; ++w) {
      if (i + 1 >= t.size())
        throw FormatError(path, "word list shorter than word count",
                          line_start);
      s.words.push_back(detail::lowercase(strip_adj_marker(t[i])));
      i += 2;  // word, lex_id
    }

    if (i >= t.size())
      throw FormatError(path, "missing pointer count", line_start);
    std::uint64_t p_cnt = 0;
    if (!parse_u64(t[i], p_cnt))
      throw FormatError(path, "bad pointer count '" + t[i] + "'", line_start);
    ++i;
    for (std::uint64_t p = 0; p < p_cnt; ++p) {
      if (i + 3 >= t.size())
        throw FormatError(path, "pointer list shorter than pointer count",
                          line_start);
      Pointer ptr;
      ptr.symbol = t[i];
      if (!parse_u64(t[i + 1], ptr.target_offset))
        throw FormatError(path, "malformed pointer offset '" + t[i + 1] + "'",
                          line_start);
      if (t[i + 2].size() != 1)
        throw FormatError(path, "bad pointer pos '" + t[i + 2] + "'",
                          line_start);
      ptr.target_pos = t[i + 2][0];
      std::uint64_t st = 0;
      if (t[i + 3].size() != 4 || !parse_hex(t[i + 3], st))
        throw FormatError(path, "bad source/target field '" + t[i + 3] + "'",
                          line_start);
      ptr.source_word = static_cast<int>(st >> 8);
      ptr.target_word = static_cast<int>(st & 0xff);
      s.pointers.push_back(std::move(ptr));
      i += 4;
    }

    if (out.count(s.offset))
      throw FormatError(path, "duplicate synset offset " +
                                  std::to_string(s.offset),
                        line_start);
    out[s.offset] = std::move(s);
  }
}

// index.pos line layout:
//   lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt offset+
inline void read_index_file(const std::string& path, char file_pos,
                            WordNetLexicon& lex) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open", 0);
  std::string line;
  std::size_t byte_pos = 0;
  while (std::getline(in, line)) {
    std::size_t line_start = byte_pos;
    byte_pos += line.size() + 1;
    if (line.empty() || line[0] == ' ') continue;

    std::vector<std::string> t = split_spaces(line);
    if (t.size() < 6)
      throw FormatError(path, "truncated index line", line_start);
    const std::string& lemma = t[0];
    if (t[1].size() != 1 || normalize_pos(t[1][0]) != file_pos)
      throw FormatError(path, "index pos '" + t[1] +
                                  "' does not belong in this file",
                        line_start);
    std::uint64_t synset_cnt = 0, p_cnt = 0;
    if (!parse_u64(t[2], synset_cnt) || synset_cnt == 0)
      throw FormatError(path, "bad synset count '" + t[2] + "'", line_start);
    if (!parse_u64(t[3], p_cnt))
      throw FormatError(path, "bad pointer count '" + t[3] + "'", line_start);
    std::size_t first_offset = 4 + p_cnt + 2;  // skip symbols + 2 count fields
    if (t.size() != first_offset + synset_cnt)
      throw FormatError(path, "field count does not match counts on line",
                        line_start);
    std::vector<std::uint64_t> offsets;
    for (std::size_t i = first_offset; i < t.size(); ++i) {
      std::uint64_t off = 0;
      if (!parse_u64(t[i], off))
        throw FormatError(path, "malformed synset offset '" + t[i] + "'",
                          line_start);
      offsets.push_back(off);
    }
    lex.add_entry(detail::lowercase(lemma), file_pos, std::move(offsets));
  }
}

}  // namespace wndb

// Loads index.{noun,verb,adj,adv} and data.{noun,verb,adj,adv} from a
// WordNet 3.0 database directory and resolves every '+' (derivationally
// related form) pointer down to (lemma, pos, synset) triples.
inline WordNetLexicon load_wordnet(const std::string& directory) {
  static const std::pair<const char*, char> kParts[] = {
      {"noun", 'n'}, {"verb", 'v'}, {"adj", 'a'}, {"adv", 'r'}};

  WordNetLexicon lex;
  std::map<char, std::map<std::uint64_t, wndb::Synset>> data;
  std::map<char, std::string> data_paths;
  for (const auto& [name, pos] : kParts) {
    std::string path = directory + "/data." + name;
    data_paths[pos] = path;
    wndb::read_data_file(path, pos, data[pos]);
  }
  for (const auto& [name, pos] : kParts)
    wndb::read_index_file(directory + "/index." + std::string(name), pos, lex);

  for (const auto& [pos, synsets] : data) {
    const std::string& path = data_paths[pos];
    for (const auto& [offset, synset] : synsets) {
      for (const wndb::Pointer& ptr : synset.pointers) {
        if (ptr.symbol != "+") continue;
        char tpos = wndb::normalize_pos(ptr.target_pos);
        auto tmap = data.find(tpos);
        if (tmap == data.end() || !tmap->second.count(ptr.target_offset))
          throw FormatError(path, "'+' pointer to nonexistent synset " +
                                      std::to_string(ptr.target_offset) +
                                      std::string(1, ptr.target_pos),
                            synset.byte_offset);
        const wndb::Synset& target = tmap->second.at(ptr.target_offset);
        if (ptr.source_word < 1 ||
            ptr.source_word > static_cast<int>(synset.words.size()))
          throw FormatError(path, "'+' pointer source word number out of range",
                            synset.byte_offset);
        if (ptr.target_word < 1 ||
            ptr.target_word > static_cast<int>(target.words.size()))
          throw FormatError(path, "'+' pointer target word number out of range",
                            synset.byte_offset);
        const std::string& src_lemma = synset.words[ptr.source_word - 1];
        const std::string& dst_lemma = target.words[ptr.target_word - 1];
        if (!lex.has_entry(dst_lemma, tpos))
          throw FormatError(path, "'+' pointer target '" + dst_lemma +
                                      "' missing from index." +
                                      std::string(1, tpos),
                            synset.byte_offset);
        lex.add_link(src_lemma, pos, offset,
                     WordNetLexicon::Target{dst_lemma, tpos,
                                            ptr.target_offset});
      }
    }
  }
  return lex;
}

// Union over all senses of (lemma, pos) of '+'-pointer targets, plus
// same-spelling entries under other POS, minus the query itself.
// Multiword lemmas (underscored) never appear in the result.
inline std::set<DerivedForm> derivational_forms(const WordNetLexicon& lex,
                                                const std::string& lemma,
                                                PosClass pos_class) {
  std::set<DerivedForm> out;
  std::string query = detail::lowercase(lemma);
  char pos = wndb::pos_letter(pos_class);
  if (const auto* offsets = lex.synsets(query, pos)) {
    for (std::uint64_t off : *offsets) {
      auto it = lex.deriv_links().find(
          WordNetLexicon::LinkKey{query, pos, off});
      if (it == lex.deriv_links().end()) continue;
      for (const auto& [tlemma, tpos, toff] : it->second)
        out.insert(DerivedForm{tlemma, wndb::pos_class_of_letter(tpos)});
    }
  }
  for (char other : {'n', 'v', 'a', 'r'}) {
    if (other == pos) continue;
    if (lex.has_entry(query, other))
      out.insert(DerivedForm{query, wndb::pos_class_of_letter(other)});
  }
  out.erase(DerivedForm{query, pos_class});
  std::erase_if(out, [](const DerivedForm& f) {
    return f.lemma.find('_') != std::string::npos;
  });
  return out;
}

// Partition into the four POS buckets; each bucket sorted and
// duplicate-free.
inline PosBuckets bucket_by_pos(const std::set<DerivedForm>& forms) {
  PosBuckets b;
  for (const DerivedForm& f : forms) {
    switch (f.pos_class) {
      case PosClass::noun: b.nouns.push_back(f); break;
      case PosClass::verb: b.verbs.push_back(f); break;
      case PosClass::adjective: b.adjectives.push_back(f); break;
      case PosClass::adverb: b.adverbs.push_back(f); break;
    }
  }
  // std::set iteration is already sorted and unique.
  return b;
}

}  // namespace persuaide

#endif  // PERSUAIDE_WORDNET_HPP
