#ifndef PERSUAIDE_SENTIMENT_HPP
#define PERSUAIDE_SENTIMENT_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "persuaide/conllu.hpp"
#include "persuaide/errors.hpp"

namespace persuaide {

// Category -> positive adjectives, hand-curated per domain. The
// "generic" category is the fallback for categories without a list.
struct AdjectiveLexicon {
  std::map<std::string, std::vector<std::string>> by_category;
};

// Noun lemma -> category (color, garment, jewelry, ...). Exact-lemma
// lookups only.
struct NounGazetteer {
  std::map<std::string, std::string> noun_to_category;
};

struct Insertion {
  int noun_index = 0;           // token the adjective modifies
  std::string adjective;
  int insert_before_index = 0;  // original token index the adjective lands before

  bool operator==(const Insertion&) const = default;
};

// TSV, one "category<TAB>adjective" per line, '#' comments allowed.
// Adjectives are lowercased and deduplicated per category.
inline AdjectiveLexicon load_adjective_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open", 0);
  AdjectiveLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw FormatError(path, "expected category<TAB>adjective", line_no);
    std::string category = detail::lowercase(line.substr(0, tab));
    std::string adjective = detail::lowercase(line.substr(tab + 1));
    auto& list = lex.by_category[category];
    if (std::find(list.begin(), list.end(), adjective) == list.end())
      list.push_back(adjective);
  }
  if (!lex.by_category.count("generic") || lex.by_category["generic"].empty())
    throw ConfigError(path + ": adjective lexicon must define a nonempty "
                             "'generic' category");
  return lex;
}

// TSV, one "noun_lemma<TAB>category" per line, '#' comments allowed.
inline NounGazetteer load_gazetteer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open", 0);
  NounGazetteer g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw FormatError(path, "expected noun_lemma<TAB>category", line_no);
    g.noun_to_category[detail::lowercase(line.substr(0, tab))] =
        detail::lowercase(line.substr(tab + 1));
  }
  return g;
}

inline std::optional<std::string> classify_noun(const std::string& lemma,
                                                const NounGazetteer& g) {
  auto it = g.noun_to_category.find(detail::lowercase(lemma));
  if (it == g.noun_to_category.end()) return std::nullopt;
  return it->second;
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic pick from the category's list (falling back to
// "generic"): FNV-1a-64 of "noun:seed" modulo the list length.
inline std::string choose_adjective(const AdjectiveLexicon& lex,
                                    const std::string& category,
                                    const std::string& noun,
                                    std::uint64_t seed) {
  auto it = lex.by_category.find(category);
  if (it == lex.by_category.end() || it->second.empty())
    it = lex.by_category.find("generic");
  if (it == lex.by_category.end() || it->second.empty())
    throw ConfigError("no adjectives for category '" + category +
                      "' and no generic fallback");
  const std::vector<std::string>& list = it->second;
  std::uint64_t h = fnv1a64(noun + ":" + std::to_string(seed));
  return list[h % list.size()];
}

namespace detail {

// Leftmost token of the contiguous amod chain directly before index;
// index itself when no amod dependent precedes it.
inline int amod_chain_start(const ParsedSentence& s, int index) {
  int start = index;
  while (start > 1) {
    const Token& prev = s.tokens[start - 2];
    if (prev.head == index && deprel_base(prev.deprel) == "amod")
      --start;
    else
      break;
  }
  return start;
}

}  // namespace detail

// Scans gazetteer-listed tokens left to right (any tag: fashion color
// words are often tagged ADJ) and inserts the chosen adjective before
// each one's adjectival-modifier chain, at most one per token, stopping
// after max_insertions. A token already modified by the chosen
// adjective (in its chain or immediately left of the insertion point)
// is skipped. The inserted word copies the initial capital of the token
// it lands before.
inline std::pair<std::string, std::vector<Insertion>> insert_adjectives(
    const ParsedSentence& s, const AdjectiveLexicon& lex,
    const NounGazetteer& g, std::size_t max_insertions, std::uint64_t seed) {
  std::vector<Insertion> insertions;
  for (const Token& t : s.tokens) {
    if (insertions.size() >= max_insertions) break;
    std::optional<std::string> category = classify_noun(t.lemma, g);
    if (!category) continue;
    std::string adjective = choose_adjective(lex, *category, t.lemma, seed);
    int before = detail::amod_chain_start(s, t.index);
    bool already_present =
        before > 1 &&
        detail::lowercase(s.tokens[before - 2].surface) == adjective;
    for (int j = before; j < t.index && !already_present; ++j)
      already_present = detail::lowercase(s.tokens[j - 1].surface) == adjective;
    if (already_present) continue;
    insertions.push_back(Insertion{t.index, adjective, before});
  }

  // Emission order follows insertion position, not scan order (a later
  // noun's modifier chain may start before an earlier insertion point).
  std::vector<Insertion> by_position = insertions;
  std::stable_sort(by_position.begin(), by_position.end(),
                   [](const Insertion& a, const Insertion& b) {
                     return a.insert_before_index < b.insert_before_index;
                   });

  ParsedSentence out;
  out.tokens.reserve(s.tokens.size() + insertions.size());
  std::size_t next = 0;
  for (const Token& t : s.tokens) {
    while (next < by_position.size() &&
           by_position[next].insert_before_index == t.index) {
      Token adj;
      adj.surface = by_position[next].adjective;
      if (!t.surface.empty() &&
          std::isupper(static_cast<unsigned char>(t.surface.front())))
        adj.surface.front() = static_cast<char>(
            std::toupper(static_cast<unsigned char>(adj.surface.front())));
      adj.lemma = by_position[next].adjective;
      adj.upos = "ADJ";
      out.tokens.push_back(std::move(adj));
      ++next;
    }
    out.tokens.push_back(t);
  }
  return {detokenize(out), insertions};
}

}  // namespace persuaide

#endif  // PERSUAIDE_SENTIMENT_HPP
