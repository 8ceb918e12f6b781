#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "persuaide/sentiment.hpp"
#include "test_paths.hpp"

using namespace persuaide;

namespace {

const AdjectiveLexicon& fixture_adjectives() {
  static AdjectiveLexicon lex =
      load_adjective_lexicon(fixture_path("lexicon/adjectives.tsv"));
  return lex;
}

const NounGazetteer& fixture_gazetteer() {
  static NounGazetteer g = load_gazetteer(fixture_path("lexicon/gazetteer.tsv"));
  return g;
}

ParsedSentence parse_one(const std::string& conllu) {
  auto sentences = parse_conllu(conllu);
  REQUIRE(sentences.size() == 1);
  return sentences[0];
}

ParsedSentence think_pink_matched() {
  return parse_one(
      "# text = Think pink but don't match it\n"
      "1\tThink\tthink\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tpink\tpink\tADJ\t_\t_\t1\txcomp\t_\t_\n"
      "3\tbut\tbut\tCCONJ\t_\t_\t5\tcc\t_\t_\n"
      "4\tdon't\tdo\tAUX\t_\t_\t5\taux\t_\t_\n"
      "5\tmatch\tmatch\tVERB\t_\t_\t1\tconj\t_\t_\n"
      "6\tit\tit\tPRON\t_\t_\t5\tobj\t_\t_\n");
}

}  // namespace

TEST_CASE("classify_noun is an exact-lemma gazetteer lookup") {
  CHECK(classify_noun("pink", fixture_gazetteer()) == "color");
  CHECK(classify_noun("clothes", fixture_gazetteer()) == "garment");
  CHECK(classify_noun("Clothes", fixture_gazetteer()) == "garment");
  CHECK_FALSE(classify_noun("democracy", fixture_gazetteer()).has_value());
  CHECK_FALSE(classify_noun("clothe", fixture_gazetteer()).has_value());
}

TEST_CASE("choose_adjective is deterministic") {
  const AdjectiveLexicon& lex = fixture_adjectives();
  SECTION("single-entry list ignores the seed") {
    CHECK(choose_adjective(lex, "color", "pink", 0) == "gleaming");
    CHECK(choose_adjective(lex, "color", "pink", 12345) == "gleaming");
  }
  SECTION("same inputs give the same pick") {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL})
      CHECK(choose_adjective(lex, "generic", "hat", seed) ==
            choose_adjective(lex, "generic", "hat", seed));
  }
  SECTION("unknown category falls back to generic") {
    std::string pick = choose_adjective(lex, "vehicle", "car", 0);
    const auto& generic = lex.by_category.at("generic");
    CHECK(std::find(generic.begin(), generic.end(), pick) != generic.end());
  }
  SECTION("no list and no generic is a configuration error") {
    AdjectiveLexicon empty;
    CHECK_THROWS_AS(choose_adjective(empty, "color", "pink", 0), ConfigError);
  }
  SECTION("hash-indexed pick matches FNV-1a-64 directly") {
    AdjectiveLexicon lex2;
    lex2.by_category["generic"] = {"zero", "one", "two"};
    std::uint64_t h = fnv1a64("hat:7");
    CHECK(choose_adjective(lex2, "generic", "hat", 7) ==
          lex2.by_category["generic"][h % 3]);
  }
}

TEST_CASE("insert_adjectives on the golden sentences") {
  SECTION("gleaming lands before pink, an ADJ-tagged gazetteer word") {
    auto [text, insertions] =
        insert_adjectives(think_pink_matched(), fixture_adjectives(),
                          fixture_gazetteer(), 2, 0);
    CHECK(text == "Think gleaming pink but don't match it");
    REQUIRE(insertions.size() == 1);
    CHECK(insertions[0] == Insertion{2, "gleaming", 2});
  }
  SECTION("stylish lands before the surviving clothes token") {
    ParsedSentence s = parse_one(
        "# text = Jewelry maybe is more expensive than outfit, but clothes "
        "are more important than jewelry\n"
        "1\tJewelry\tjewelry\tNOUN\t_\t_\t5\tnsubj\t_\t_\n"
        "2\tmaybe\tmaybe\tADV\t_\t_\t5\tadvmod\t_\t_\n"
        "3\tis\tbe\tAUX\t_\t_\t5\tcop\t_\t_\n"
        "4\tmore\tmore\tADV\t_\t_\t5\tadvmod\t_\t_\n"
        "5\texpensive\texpensive\tADJ\t_\t_\t0\troot\t_\t_\n"
        "6\tthan\tthan\tADP\t_\t_\t7\tcase\t_\t_\n"
        "7\toutfit\toutfit\tNOUN\t_\t_\t5\tobl\t_\t_\n"
        "8\t,\t,\tPUNCT\t_\t_\t13\tpunct\t_\t_\n"
        "9\tbut\tbut\tCCONJ\t_\t_\t13\tcc\t_\t_\n"
        "10\tclothes\tclothes\tNOUN\t_\t_\t13\tnsubj\t_\t_\n"
        "11\tare\tbe\tAUX\t_\t_\t13\tcop\t_\t_\n"
        "12\tmore\tmore\tADV\t_\t_\t13\tadvmod\t_\t_\n"
        "13\timportant\timportant\tADJ\t_\t_\t5\tconj\t_\t_\n"
        "14\tthan\tthan\tADP\t_\t_\t15\tcase\t_\t_\n"
        "15\tjewelry\tjewelry\tNOUN\t_\t_\t13\tobl\t_\t_\n");
    auto [text, insertions] =
        insert_adjectives(s, fixture_adjectives(), fixture_gazetteer(), 2, 0);
    CHECK(text ==
          "Jewelry maybe is more expensive than outfit, but stylish clothes "
          "are more important than jewelry");
    REQUIRE(insertions.size() == 1);
    CHECK(insertions[0].noun_index == 10);
  }
}

TEST_CASE("insert_adjectives mechanics") {
  const AdjectiveLexicon& lex = fixture_adjectives();
  const NounGazetteer& g = fixture_gazetteer();

  SECTION("no gazetteer hits leaves the sentence untouched") {
    ParsedSentence s = parse_one(
        "1\tBirds\tbird\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
        "2\tsing\tsing\tVERB\t_\t_\t0\troot\t_\t_\n");
    auto [text, insertions] = insert_adjectives(s, lex, g, 2, 0);
    CHECK(text == "Birds sing");
    CHECK(insertions.empty());
  }
  SECTION("insertion lands before the amod chain") {
    ParsedSentence s = parse_one(
        "1\tThe\tthe\tDET\t_\t_\t4\tdet\t_\t_\n"
        "2\tsoft\tsoft\tADJ\t_\t_\t4\tamod\t_\t_\n"
        "3\tblue\tblue\tADJ\t_\t_\t4\tamod\t_\t_\n"
        "4\tgown\tgown\tNOUN\t_\t_\t0\troot\t_\t_\n");
    auto [text, insertions] = insert_adjectives(s, lex, g, 2, 0);
    CHECK(text == "The stylish soft blue gown");
    REQUIRE(insertions.size() == 1);
    CHECK(insertions[0] == Insertion{4, "stylish", 2});
  }
  SECTION("a noun already modified by the chosen adjective is skipped") {
    ParsedSentence s = parse_one(
        "1\tstylish\tstylish\tADJ\t_\t_\t2\tamod\t_\t_\n"
        "2\tclothes\tclothes\tNOUN\t_\t_\t0\troot\t_\t_\n");
    auto [text, insertions] = insert_adjectives(s, lex, g, 2, 0);
    CHECK(text == "stylish clothes");
    CHECK(insertions.empty());
  }
  SECTION("the cap limits insertions left to right") {
    ParsedSentence s = parse_one(
        "1\tclothes\tclothes\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "2\tgown\tgown\tNOUN\t_\t_\t1\tconj\t_\t_\n"
        "3\tdress\tdress\tNOUN\t_\t_\t1\tconj\t_\t_\n");
    auto [text, insertions] = insert_adjectives(s, lex, g, 2, 0);
    REQUIRE(insertions.size() == 2);
    CHECK(insertions[0].noun_index == 1);
    CHECK(insertions[1].noun_index == 2);
    CHECK(text == "stylish clothes stylish gown dress");

    auto [text1, one] = insert_adjectives(s, lex, g, 1, 0);
    CHECK(one.size() == 1);
    CHECK(text1 == "stylish clothes gown dress");
  }
  SECTION("sentence-initial insertion copies the capital") {
    ParsedSentence s = parse_one(
        "1\tClothes\tclothes\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
        "2\tmatter\tmatter\tVERB\t_\t_\t0\troot\t_\t_\n");
    auto [text, insertions] = insert_adjectives(s, lex, g, 2, 0);
    CHECK(text == "Stylish Clothes matter");
  }
  SECTION("output token count and restorability") {
    ParsedSentence s = think_pink_matched();
    auto [text, insertions] = insert_adjectives(s, lex, g, 2, 0);
    // Re-tokenize on spaces and drop the inserted words; the original
    // token sequence must come back.
    std::vector<std::string> words;
    std::istringstream ss(text);
    std::string w;
    while (ss >> w) words.push_back(w);
    CHECK(words.size() == s.tokens.size() + insertions.size());
    std::vector<std::string> original;
    for (const Token& t : s.tokens) original.push_back(t.surface);
    std::vector<std::string> restored;
    std::size_t skip = 0;
    for (const std::string& word : words) {
      if (skip < insertions.size() && word == insertions[skip].adjective) {
        ++skip;
        continue;
      }
      restored.push_back(word);
    }
    CHECK(restored == original);
  }
  SECTION("every inserted adjective belongs to its category list") {
    ParsedSentence s = parse_one(
        "1\tpink\tpink\tADJ\t_\t_\t2\tamod\t_\t_\n"
        "2\tclothes\tclothes\tNOUN\t_\t_\t0\troot\t_\t_\n");
    auto [text, insertions] = insert_adjectives(s, lex, g, 5, 3);
    for (const Insertion& ins : insertions) {
      const Token& noun = s.tokens[ins.noun_index - 1];
      auto category = classify_noun(noun.lemma, g);
      REQUIRE(category);
      const auto& list = lex.by_category.at(*category);
      CHECK(std::find(list.begin(), list.end(), ins.adjective) != list.end());
      CHECK(ins.insert_before_index <= ins.noun_index);
    }
  }
}

TEST_CASE("lexicon and gazetteer loading") {
  SECTION("fixture files parse with comments skipped") {
    CHECK(fixture_adjectives().by_category.at("color") ==
          std::vector<std::string>{"gleaming"});
    CHECK(fixture_gazetteer().noun_to_category.at("pink") == "color");
  }
  SECTION("missing generic category is a configuration error") {
    TempDir dir;
    dir.write("adj.tsv", "color\tgleaming\n");
    CHECK_THROWS_AS(load_adjective_lexicon(dir.file("adj.tsv")), ConfigError);
  }
  SECTION("malformed lines carry line numbers") {
    TempDir dir;
    dir.write("adj.tsv", "generic\tfine\nnotab\n");
    try {
      load_adjective_lexicon(dir.file("adj.tsv"));
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.position() == 2);
    }
    dir.write("gaz.tsv", "pink\n");
    CHECK_THROWS_AS(load_gazetteer(dir.file("gaz.tsv")), FormatError);
  }
  SECTION("duplicate adjectives collapse") {
    TempDir dir;
    dir.write("adj.tsv", "generic\tfine\ngeneric\tfine\ngeneric\tnice\n");
    AdjectiveLexicon lex = load_adjective_lexicon(dir.file("adj.tsv"));
    CHECK(lex.by_category.at("generic") ==
          std::vector<std::string>{"fine", "nice"});
  }
}
