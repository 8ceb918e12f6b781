#ifndef PERSUAIDE_CONLLU_HPP
#define PERSUAIDE_CONLLU_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "persuaide/errors.hpp"

namespace persuaide {

// One dependency-parsed token. index is 1-based; head 0 marks the
// syntactic root. lemma is always lowercase.
struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string upos;
  int head = 0;
  std::string deprel;

  bool operator==(const Token&) const = default;
};

struct ParsedSentence {
  std::string raw_text;
  std::vector<Token> tokens;

  bool operator==(const ParsedSentence&) const = default;
};

enum class PosClass { noun, verb, adjective, adverb };

inline const char* pos_class_name(PosClass c) {
  switch (c) {
    case PosClass::noun: return "noun";
    case PosClass::verb: return "verb";
    case PosClass::adjective: return "adjective";
    case PosClass::adverb: return "adverb";
  }
  return "?";
}

// Maps a universal POS tag to the four-way content-word classification.
// NOUN and PROPN collapse to noun; everything else is not a content word.
inline std::optional<PosClass> pos_class_of_upos(std::string_view upos) {
  if (upos == "NOUN" || upos == "PROPN") return PosClass::noun;
  if (upos == "VERB") return PosClass::verb;
  if (upos == "ADJ") return PosClass::adjective;
  if (upos == "ADV") return PosClass::adverb;
  return std::nullopt;
}

struct ContentWord {
  Token token;
  PosClass pos_class = PosClass::noun;

  bool operator==(const ContentWord&) const = default;
};

namespace detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

// IDs like "3-4" (multiword ranges) and "5.1" (empty nodes) are not
// regular token lines.
inline bool is_range_or_empty_id(const std::string& id) {
  return id.find('-') != std::string::npos ||
         id.find('.') != std::string::npos;
}

inline bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  int value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    if (value > 100000000) return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

// UD relation labels may carry a subtype after a colon ("nsubj:pass").
inline std::string deprel_base(const std::string& deprel) {
  std::size_t colon = deprel.find(':');
  return colon == std::string::npos ? deprel : deprel.substr(0, colon);
}

inline bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty()) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

// Validates the head function of a finished block: single root, heads in
// range, no self-loops, no cycles. line_numbers[i] is the stream line of
// token i, used for error reporting.
inline void validate_tree(const std::vector<Token>& tokens,
                          const std::vector<std::size_t>& line_numbers) {
  const int n = static_cast<int>(tokens.size());
  int root_count = 0;
  std::size_t first_line = line_numbers.empty() ? 0 : line_numbers.front();
  for (int i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    if (t.head < 0 || t.head > n)
      throw ParseError("head " + std::to_string(t.head) +
                           " out of range [0, " + std::to_string(n) + "]",
                       line_numbers[i]);
    if (t.head == t.index)
      throw ParseError("token is its own head", line_numbers[i]);
    if (t.head == 0) {
      ++root_count;
      if (root_count > 1)
        throw ParseError("multiple root tokens in sentence", line_numbers[i]);
    }
  }
  if (root_count == 0)
    throw ParseError("sentence has no root token", first_line);
  // Walk each token toward the root; a walk longer than n means a cycle.
  for (int i = 0; i < n; ++i) {
    int cur = tokens[i].head;
    int steps = 0;
    while (cur != 0) {
      cur = tokens[cur - 1].head;
      if (++steps > n)
        throw ParseError("cycle in dependency heads", line_numbers[i]);
    }
  }
}

}  // namespace detail

// Parses a CoNLL-U stream: blank-line-separated sentence blocks of
// 10 tab-separated columns
//   ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC
// Comment lines start with '#'; multiword ranges (ID "1-2") and empty
// nodes (ID "1.1") are skipped. Lemmas are lowercased; a "_" lemma falls
// back to the lowercased form. raw_text comes from a "# text =" comment
// when present, else from space-joined forms.
inline std::vector<ParsedSentence> parse_conllu(std::istream& in) {
  std::vector<ParsedSentence> sentences;
  std::vector<Token> tokens;
  std::vector<std::size_t> token_lines;
  std::optional<std::string> text_comment;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (tokens.empty()) {
      text_comment.reset();
      return;
    }
    detail::validate_tree(tokens, token_lines);
    ParsedSentence s;
    if (text_comment) {
      s.raw_text = *text_comment;
    } else {
      std::string joined;
      for (const Token& t : tokens) {
        if (!joined.empty()) joined += ' ';
        joined += t.surface;
      }
      s.raw_text = joined;
    }
    s.tokens = std::move(tokens);
    sentences.push_back(std::move(s));
    tokens.clear();
    token_lines.clear();
    text_comment.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      constexpr std::string_view kTextKey = "# text =";
      if (line.compare(0, kTextKey.size(), kTextKey) == 0) {
        std::string value = line.substr(kTextKey.size());
        if (!value.empty() && value.front() == ' ') value.erase(0, 1);
        text_comment = value;
      }
      continue;
    }
    std::vector<std::string> cols = detail::split_tabs(line);
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, got " +
                           std::to_string(cols.size()),
                       line_no);
    if (detail::is_range_or_empty_id(cols[0])) continue;

    Token t;
    if (!detail::parse_int(cols[0], t.index) || t.index <= 0)
      throw ParseError("bad token id '" + cols[0] + "'", line_no);
    if (t.index != static_cast<int>(tokens.size()) + 1)
      throw ParseError("token ids not contiguous: expected " +
                           std::to_string(tokens.size() + 1) + ", got " +
                           std::to_string(t.index),
                       line_no);
    t.surface = cols[1];
    t.lemma = cols[2] == "_" ? detail::lowercase(cols[1])
                             : detail::lowercase(cols[2]);
    if (t.lemma.empty())
      throw ParseError("empty lemma", line_no);
    t.upos = cols[3];
    if (!detail::parse_int(cols[6], t.head))
      throw ParseError("non-integer head '" + cols[6] + "'", line_no);
    t.deprel = cols[7];
    tokens.push_back(std::move(t));
    token_lines.push_back(line_no);
  }
  flush();
  return sentences;
}

inline std::vector<ParsedSentence> parse_conllu(const std::string& text) {
  std::istringstream in(text);
  return parse_conllu(in);
}

// Content words in sentence order: tokens tagged NOUN/PROPN/VERB/ADJ/ADV.
inline std::vector<ContentWord> content_words(const ParsedSentence& s) {
  std::vector<ContentWord> out;
  for (const Token& t : s.tokens) {
    if (auto cls = pos_class_of_upos(t.upos))
      out.push_back(ContentWord{t, *cls});
  }
  return out;
}

// Joins surfaces with single spaces, attaching PUNCT tokens directly to
// the preceding word.
inline std::string detokenize(const ParsedSentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    if (i > 0 && t.upos != "PUNCT") out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace persuaide

#endif  // PERSUAIDE_CONLLU_HPP
