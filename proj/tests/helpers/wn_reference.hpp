#ifndef PERSUAIDE_TESTS_WN_REFERENCE_HPP
#define PERSUAIDE_TESTS_WN_REFERENCE_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Independent WordNet reader used only as a test oracle. Unlike the
// production loader it ignores the index.* files entirely and derives
// everything from a line scan of the data.* files, so agreement between
// the two is a meaningful check.
namespace wnref {

enum class Pos { noun, verb, adj, adv };

inline Pos pos_of_letter(char c) {
  switch (c) {
    case 'n': return Pos::noun;
    case 'v': return Pos::verb;
    case 'a':
    case 's': return Pos::adj;
    case 'r': return Pos::adv;
  }
  throw std::runtime_error(std::string("bad pos letter ") + c);
}

struct RefPointer {
  std::string symbol;
  std::uint64_t target_offset;
  Pos target_pos;
  int source_word;
  int target_word;
};

struct RefSynset {
  std::uint64_t offset;
  std::vector<std::string> words;
  std::vector<RefPointer> pointers;
};

struct RefDb {
  std::map<Pos, std::map<std::uint64_t, RefSynset>> synsets;

  const RefSynset& at(Pos pos, std::uint64_t offset) const {
    return synsets.at(pos).at(offset);
  }
};

inline std::string ref_lower(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline RefDb read_reference_db(const std::string& dir) {
  RefDb db;
  const std::pair<const char*, Pos> parts[] = {{"noun", Pos::noun},
                                               {"verb", Pos::verb},
                                               {"adj", Pos::adj},
                                               {"adv", Pos::adv}};
  for (const auto& [name, pos] : parts) {
    std::ifstream in(dir + "/data." + name);
    if (!in) throw std::runtime_error("reference reader: cannot open data." +
                                      std::string(name));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == ' ') continue;
      std::istringstream ss(line);
      RefSynset syn;
      std::string lexnum, sstype, wcnt_hex;
      ss >> syn.offset >> lexnum >> sstype >> wcnt_hex;
      int wcnt = static_cast<int>(std::stoul(wcnt_hex, nullptr, 16));
      for (int i = 0; i < wcnt; ++i) {
        std::string word, lexid;
        ss >> word >> lexid;
        syn.words.push_back(ref_lower(word));
      }
      int pcnt = 0;
      ss >> pcnt;
      for (int i = 0; i < pcnt; ++i) {
        RefPointer p;
        std::string posc, st;
        ss >> p.symbol >> p.target_offset >> posc >> st;
        p.target_pos = pos_of_letter(posc[0]);
        p.source_word = static_cast<int>(std::stoul(st.substr(0, 2), nullptr, 16));
        p.target_word = static_cast<int>(std::stoul(st.substr(2, 2), nullptr, 16));
        syn.pointers.push_back(p);
      }
      db.synsets[pos][syn.offset] = std::move(syn);
    }
  }
  return db;
}

// Derivational forms per the artifact's rules, recomputed from the data
// files alone: '+' targets of the lemma's synsets, plus same-spelling
// presence under other POS, minus the query, minus multiword lemmas.
inline std::set<std::pair<std::string, Pos>> reference_derivational_forms(
    const RefDb& db, const std::string& lemma, Pos pos) {
  std::set<std::pair<std::string, Pos>> out;
  auto it = db.synsets.find(pos);
  if (it != db.synsets.end()) {
    for (const auto& [offset, syn] : it->second) {
      for (std::size_t w = 0; w < syn.words.size(); ++w) {
        if (syn.words[w] != lemma) continue;
        for (const RefPointer& p : syn.pointers) {
          if (p.symbol != "+") continue;
          if (p.source_word != static_cast<int>(w) + 1) continue;
          const RefSynset& target = db.at(p.target_pos, p.target_offset);
          out.insert({target.words.at(p.target_word - 1), p.target_pos});
        }
      }
    }
  }
  for (Pos other : {Pos::noun, Pos::verb, Pos::adj, Pos::adv}) {
    if (other == pos) continue;
    auto oit = db.synsets.find(other);
    if (oit == db.synsets.end()) continue;
    for (const auto& [offset, syn] : oit->second) {
      for (const std::string& w : syn.words) {
        if (w == lemma) {
          out.insert({lemma, other});
          break;
        }
      }
    }
  }
  out.erase({lemma, pos});
  for (auto it2 = out.begin(); it2 != out.end();) {
    if (it2->first.find('_') != std::string::npos)
      it2 = out.erase(it2);
    else
      ++it2;
  }
  return out;
}

}  // namespace wnref

#endif  // PERSUAIDE_TESTS_WN_REFERENCE_HPP
