#ifndef PERSUAIDE_TESTS_NAIVE_CONLLU_HPP
#define PERSUAIDE_TESTS_NAIVE_CONLLU_HPP

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

// Deterministic toy "parser" for adapter tests: whitespace tokens,
// trailing punctuation split off, everything tagged NOUN except
// punctuation, token 1 as root and all else attached to it.
inline std::string naive_conllu(const std::string& raw) {
  std::vector<std::string> pieces;
  {
    std::istringstream in(raw);
    std::string tok;
    while (in >> tok) {
      std::string tail;
      while (!tok.empty() && std::ispunct(static_cast<unsigned char>(tok.back())) &&
             tok.back() != '\'') {
        tail.insert(tail.begin(), tok.back());
        tok.pop_back();
      }
      if (!tok.empty()) pieces.push_back(tok);
      for (char c : tail) pieces.push_back(std::string(1, c));
    }
  }
  if (pieces.empty()) return "";

  std::ostringstream out;
  out << "# text = " << raw << "\n";
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string& surface = pieces[i];
    bool punct = surface.size() == 1 &&
                 std::ispunct(static_cast<unsigned char>(surface[0]));
    std::string lemma;
    for (char c : surface)
      lemma += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    int head = i == 0 ? 0 : 1;
    out << (i + 1) << '\t' << surface << '\t' << lemma << '\t'
        << (punct ? "PUNCT" : "NOUN") << "\t_\t_\t" << head << '\t'
        << (i == 0 ? "root" : (punct ? "punct" : "dep")) << "\t_\t_\n";
  }
  return out.str();
}

#endif  // PERSUAIDE_TESTS_NAIVE_CONLLU_HPP
