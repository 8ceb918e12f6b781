#ifndef PERSUAIDE_SUBSTITUTE_HPP
#define PERSUAIDE_SUBSTITUTE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "persuaide/conllu.hpp"
#include "persuaide/matrix.hpp"
#include "persuaide/wordnet.hpp"

namespace persuaide {

// The dependency edges incident to one word, with the word's role in
// each: child_of when the word is the dependent, parent_of when it is
// the head. Punct edges and the root pseudo-edge are excluded.
struct RelationContext {
  enum class Role { child_of, parent_of };

  struct Relation {
    Role role = Role::child_of;
    std::string other_lemma;

    bool operator==(const Relation&) const = default;
  };

  Token word;
  std::vector<Relation> relations;
};

struct ScoreContribution {
  std::string a;  // head lemma fed to the frequency lookup
  std::string b;  // dependent lemma fed to the frequency lookup
  std::uint64_t f = 0;

  bool operator==(const ScoreContribution&) const = default;
};

// One (input word, candidate replacement) row of the scored table.
struct CandidatePair {
  ContentWord w;
  DerivedForm k;
  double score = 0.0;
  std::vector<ScoreContribution> contributions;
};

struct SubstitutionResult {
  enum class Direction { input_modified, quote_modified };

  Direction direction = Direction::input_modified;
  std::optional<CandidatePair> chosen;
  std::vector<CandidatePair> candidates;
  std::string output_text;
  ParsedSentence output_sentence;  // base sentence with the chosen token patched
};

inline const char* direction_name(SubstitutionResult::Direction d) {
  return d == SubstitutionResult::Direction::input_modified ? "input_modified"
                                                            : "quote_modified";
}

// All non-punct, non-root edges incident to w: (child_of, head lemma)
// when w is the dependent, (parent_of, dependent lemma) when w heads the
// edge. The child_of entry comes first, then dependents in token order.
inline RelationContext relations_containing(const ParsedSentence& s,
                                            const Token& w) {
  RelationContext ctx;
  ctx.word = w;
  if (w.head != 0 && detail::deprel_base(w.deprel) != "punct")
    ctx.relations.push_back({RelationContext::Role::child_of,
                             s.tokens[w.head - 1].lemma});
  for (const Token& t : s.tokens) {
    if (t.head != w.index) continue;
    if (detail::deprel_base(t.deprel) == "punct") continue;
    ctx.relations.push_back({RelationContext::Role::parent_of, t.lemma});
  }
  return ctx;
}

// Geometric mean of the smoothed relation frequencies:
//   exp( (1/|R|) * sum over R of ln(f(a, b) + 1) )
// where a/b depend on the word's role: as dependent the candidate takes
// the b slot under its head; as head it takes the a slot over its
// dependent. An empty context scores 0.
inline double matching_score(const RelationCounts& m,
                             const RelationContext& ctx, const std::string& k,
                             std::vector<ScoreContribution>* contributions =
                                 nullptr) {
  if (contributions) contributions->clear();
  if (ctx.relations.empty()) return 0.0;
  double log_sum = 0.0;
  for (const RelationContext::Relation& r : ctx.relations) {
    std::string a, b;
    if (r.role == RelationContext::Role::child_of) {
      a = r.other_lemma;
      b = k;
    } else {
      a = k;
      b = r.other_lemma;
    }
    std::uint64_t f = m.lookup(a, b);
    log_sum += std::log(static_cast<double>(f) + 1.0);
    if (contributions) contributions->push_back({std::move(a), std::move(b), f});
  }
  return std::exp(log_sum / static_cast<double>(ctx.relations.size()));
}

// Recomputes a score from its recorded contributions; the inverse check
// used by trace validation.
inline double score_from_contributions(
    const std::vector<ScoreContribution>& contributions) {
  if (contributions.empty()) return 0.0;
  double log_sum = 0.0;
  for (const ScoreContribution& c : contributions)
    log_sum += std::log(static_cast<double>(c.f) + 1.0);
  return std::exp(log_sum / static_cast<double>(contributions.size()));
}

// Unscored candidate rows: for every content word q of the source
// sentence, its derivational forms plus q itself form the POS buckets;
// every content word w of the target sentence pairs with the members of
// its own POS bucket, excluding same-lemma no-ops.
inline std::vector<CandidatePair> enumerate_candidates(
    const ParsedSentence& target, const ParsedSentence& source,
    const WordNetLexicon& lex) {
  std::set<DerivedForm> pool;
  for (const ContentWord& q : content_words(source)) {
    std::set<DerivedForm> forms = derivational_forms(lex, q.token.lemma,
                                                     q.pos_class);
    forms.insert(DerivedForm{q.token.lemma, q.pos_class});
    pool.insert(forms.begin(), forms.end());
  }
  PosBuckets buckets = bucket_by_pos(pool);

  std::vector<CandidatePair> rows;
  for (const ContentWord& w : content_words(target)) {
    const std::vector<DerivedForm>* bucket = nullptr;
    switch (w.pos_class) {
      case PosClass::noun: bucket = &buckets.nouns; break;
      case PosClass::verb: bucket = &buckets.verbs; break;
      case PosClass::adjective: bucket = &buckets.adjectives; break;
      case PosClass::adverb: bucket = &buckets.adverbs; break;
    }
    for (const DerivedForm& k : *bucket) {
      if (k.lemma == w.token.lemma) continue;
      CandidatePair row;
      row.w = w;
      row.k = k;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void score_candidates(std::vector<CandidatePair>& rows,
                             const ParsedSentence& sentence,
                             const RelationCounts& m) {
  int last_index = -1;
  RelationContext ctx;
  for (CandidatePair& row : rows) {
    if (row.w.token.index != last_index) {
      ctx = relations_containing(sentence, row.w.token);
      last_index = row.w.token.index;
    }
    row.score = matching_score(m, ctx, row.k.lemma, &row.contributions);
  }
}

// Maximum score; ties go to the leftmost w, then the lexicographically
// smallest k lemma.
inline std::optional<CandidatePair> select_best(
    const std::vector<CandidatePair>& table) {
  const CandidatePair* best = nullptr;
  for (const CandidatePair& row : table) {
    if (!best) {
      best = &row;
      continue;
    }
    if (row.score > best->score ||
        (row.score == best->score &&
         (row.w.token.index < best->w.token.index ||
          (row.w.token.index == best->w.token.index &&
           row.k.lemma < best->k.lemma))))
      best = &row;
  }
  if (!best) return std::nullopt;
  return *best;
}

namespace detail {

inline bool is_all_caps(const std::string& s) {
  bool has_alpha = false;
  for (unsigned char c : s) {
    if (std::isalpha(c)) {
      has_alpha = true;
      if (std::islower(c)) return false;
    }
  }
  return has_alpha && s.size() > 1;
}

// Initial-capital and all-caps patterns carry over; anything else maps
// to the bare lowercase lemma.
inline std::string transfer_capitalization(const std::string& original,
                                           const std::string& replacement) {
  std::string out = replacement;
  if (is_all_caps(original)) {
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
      return static_cast<char>(std::toupper(c));
    });
  } else if (!original.empty() && std::isupper(static_cast<unsigned char>(
                 original.front()))) {
    if (!out.empty())
      out.front() = static_cast<char>(
          std::toupper(static_cast<unsigned char>(out.front())));
  }
  return out;
}

}  // namespace detail

// The base sentence with exactly the token at the pair's index replaced
// by the candidate lemma (capitalization transferred, POS and lemma
// updated). The tree structure is untouched.
inline ParsedSentence substituted_sentence(const ParsedSentence& s,
                                           const CandidatePair& pair) {
  ParsedSentence out = s;
  Token& t = out.tokens[pair.w.token.index - 1];
  t.surface = detail::transfer_capitalization(t.surface, pair.k.lemma);
  t.lemma = pair.k.lemma;
  switch (pair.k.pos_class) {
    case PosClass::noun: t.upos = "NOUN"; break;
    case PosClass::verb: t.upos = "VERB"; break;
    case PosClass::adjective: t.upos = "ADJ"; break;
    case PosClass::adverb: t.upos = "ADV"; break;
  }
  out.raw_text = detokenize(out);
  return out;
}

inline std::string apply_substitution(const ParsedSentence& s,
                                      const CandidatePair& pair) {
  return substituted_sentence(s, pair).raw_text;
}

// One full substitution pass between the input sentence and the matched
// quote. input_modified rewrites the input using the quote's vocabulary;
// quote_modified swaps the roles symmetrically and rewrites the quote.
inline SubstitutionResult transform_with_quote(
    const ParsedSentence& input, const ParsedSentence& quote_parse,
    const RelationCounts& m, const WordNetLexicon& lex,
    SubstitutionResult::Direction direction) {
  const bool input_side =
      direction == SubstitutionResult::Direction::input_modified;
  const ParsedSentence& base = input_side ? input : quote_parse;
  const ParsedSentence& source = input_side ? quote_parse : input;

  SubstitutionResult result;
  result.direction = direction;
  result.candidates = enumerate_candidates(base, source, lex);
  score_candidates(result.candidates, base, m);
  result.chosen = select_best(result.candidates);
  if (result.chosen) {
    result.output_sentence = substituted_sentence(base, *result.chosen);
    result.output_text = result.output_sentence.raw_text;
  } else {
    result.output_sentence = base;
    result.output_text = base.raw_text;
  }
  return result;
}

}  // namespace persuaide

#endif  // PERSUAIDE_SUBSTITUTE_HPP
