#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "persuaide/wordnet.hpp"
#include "test_paths.hpp"

using namespace persuaide;

namespace {

const WordNetLexicon& fixture_lexicon() {
  static WordNetLexicon lex = load_wordnet(fixture_path("wordnet"));
  return lex;
}

std::set<DerivedForm> forms(const std::string& lemma, PosClass pos) {
  return derivational_forms(fixture_lexicon(), lemma, pos);
}

// A fixture copy that a test can then corrupt.
void copy_fixture_into(const TempDir& dir,
                       const std::string& skip_file = "") {
  for (const auto& entry :
       std::filesystem::directory_iterator(fixture_path("wordnet"))) {
    if (entry.path().filename() == skip_file) continue;
    std::filesystem::copy_file(entry.path(),
                               dir.file(entry.path().filename().string()));
  }
}

}  // namespace

TEST_CASE("load populates entries from the index files") {
  const WordNetLexicon& lex = fixture_lexicon();
  REQUIRE(lex.synsets("wear", 'v') != nullptr);
  CHECK(lex.synsets("wear", 'v')->size() >= 1);
  CHECK(lex.has_entry("pink", 'a'));
  CHECK(lex.has_entry("pink", 'n'));
  CHECK(lex.has_entry("jewellery", 'n'));
  CHECK_FALSE(lex.has_entry("qwxzy", 'n'));
}

TEST_CASE("satellite adjectives normalize to 'a'") {
  // "matching" is stored as ss_type 's' in data.adj.
  CHECK(fixture_lexicon().has_entry("matching", 'a'));
  CHECK(forms("matching", PosClass::adjective).count(
      DerivedForm{"match", PosClass::verb}));
}

TEST_CASE("derivational forms union pointers and cross-POS spellings") {
  CHECK(forms("pink", PosClass::adjective) ==
        std::set<DerivedForm>{{"pink", PosClass::noun}});
  CHECK(forms("pink", PosClass::noun) ==
        std::set<DerivedForm>{{"pink", PosClass::adjective}});
  CHECK(forms("wear", PosClass::verb) ==
        std::set<DerivedForm>{{"wear", PosClass::noun}});
  CHECK(forms("match", PosClass::verb) ==
        std::set<DerivedForm>{{"match", PosClass::noun},
                              {"matching", PosClass::adjective}});
  CHECK(forms("quickly", PosClass::adverb) ==
        std::set<DerivedForm>{{"quick", PosClass::adjective}});
}

TEST_CASE("unknown lemma has no derivational forms") {
  CHECK(forms("qwxzy", PosClass::noun).empty());
}

TEST_CASE("multiword lemmas never appear in results") {
  // match_v points at the match_game synset, which must be filtered.
  for (const DerivedForm& f : forms("match", PosClass::verb))
    CHECK(f.lemma.find('_') == std::string::npos);
}

TEST_CASE("the query itself is never returned") {
  for (const char* lemma : {"pink", "wear", "match", "slip"}) {
    for (PosClass pos : {PosClass::noun, PosClass::verb, PosClass::adjective,
                         PosClass::adverb}) {
      CHECK_FALSE(forms(lemma, pos).count(DerivedForm{lemma, pos}));
    }
  }
}

TEST_CASE("pointer word numbers resolve to specific lemmas") {
  // accentuation's '+' points at word 1 of [accentuate, stress].
  CHECK(forms("accentuation", PosClass::noun) ==
        std::set<DerivedForm>{{"accentuate", PosClass::verb}});
  // "stress" shares the synset but owns no pointer.
  CHECK(forms("stress", PosClass::verb).empty());
}

TEST_CASE("stored '+' links are symmetric") {
  // Multiword lemmas are filtered out of query results, so the
  // visible symmetry holds on single-word lemmas only.
  const WordNetLexicon& lex = fixture_lexicon();
  for (const auto& [key, targets] : lex.deriv_links()) {
    const auto& [lemma, pos, offset] = key;
    if (lemma.find('_') != std::string::npos) continue;
    for (const auto& [tlemma, tpos, toffset] : targets) {
      if (tlemma.find('_') != std::string::npos) continue;
      auto reverse = derivational_forms(lex, tlemma,
                                        wndb::pos_class_of_letter(tpos));
      INFO(lemma << "/" << pos << " -> " << tlemma << "/" << tpos);
      CHECK(reverse.count(DerivedForm{lemma, wndb::pos_class_of_letter(pos)}));
    }
  }
}

TEST_CASE("bucket_by_pos partitions, sorts and deduplicates") {
  SECTION("empty set gives four empty buckets") {
    PosBuckets b = bucket_by_pos({});
    CHECK(b.nouns.empty());
    CHECK(b.verbs.empty());
    CHECK(b.adjectives.empty());
    CHECK(b.adverbs.empty());
  }
  SECTION("mixed set") {
    std::set<DerivedForm> in{{"match", PosClass::verb},
                             {"match", PosClass::noun},
                             {"matching", PosClass::adjective}};
    PosBuckets b = bucket_by_pos(in);
    REQUIRE(b.verbs.size() == 1);
    CHECK(b.verbs[0].lemma == "match");
    REQUIRE(b.nouns.size() == 1);
    CHECK(b.nouns[0].lemma == "match");
    REQUIRE(b.adjectives.size() == 1);
    CHECK(b.adjectives[0].lemma == "matching");
    CHECK(b.adverbs.empty());

    std::size_t total = b.nouns.size() + b.verbs.size() +
                        b.adjectives.size() + b.adverbs.size();
    CHECK(total == in.size());
  }
  SECTION("buckets are sorted") {
    std::set<DerivedForm> in{{"zebra", PosClass::noun},
                             {"apple", PosClass::noun},
                             {"mango", PosClass::noun}};
    PosBuckets b = bucket_by_pos(in);
    REQUIRE(b.nouns.size() == 3);
    CHECK(std::is_sorted(b.nouns.begin(), b.nouns.end()));
  }
}

TEST_CASE("missing database file fails the load") {
  TempDir dir;
  copy_fixture_into(dir, "data.verb");
  try {
    load_wordnet(dir.str());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.source().find("data.verb") != std::string::npos);
  }
}

TEST_CASE("license header lines with leading spaces are skipped") {
  // The fixture files all begin with such lines; loading succeeds and
  // none of the header words leak into the lexicon.
  CHECK_FALSE(fixture_lexicon().has_entry("database", 'n'));
  CHECK_FALSE(fixture_lexicon().has_entry("this", 'n'));
}

TEST_CASE("malformed offsets and dangling pointers are load errors") {
  SECTION("malformed synset offset") {
    TempDir dir;
    copy_fixture_into(dir, "data.adv");
    dir.write("data.adv",
              "  1 header\n"
              "notanumber 02 r 01 maybe 0 000 | by chance\n");
    try {
      load_wordnet(dir.str());
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.source().find("data.adv") != std::string::npos);
      CHECK(e.position() == 11);  // byte offset of the bad line
    }
  }
  SECTION("pointer to nonexistent synset") {
    TempDir dir;
    copy_fixture_into(dir, "data.adv");
    dir.write("data.adv",
              "  1 header\n"
              "00000011 02 r 01 maybe 0 001 + 99999999 a 0101 | by chance\n");
    CHECK_THROWS_AS(load_wordnet(dir.str()), FormatError);
  }
  SECTION("pointer word number out of range") {
    TempDir dir;
    copy_fixture_into(dir, "data.adv");
    dir.write("data.adv",
              "  1 header\n"
              "00000011 02 r 01 quickly 0 001 + 00000178 a 0901 | fast\n");
    CHECK_THROWS_AS(load_wordnet(dir.str()), FormatError);
  }
}
