#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "ppsm/errors.hpp"
#include "ppsm/gram.hpp"
#include "test_util.hpp"

using namespace ppsm;
using ppsm::test::build_dict;
using ppsm::test::random_dna;

namespace {

GramConfig cfg(std::uint8_t q_min, std::uint8_t q_max, bool positional = false) {
    GramConfig c;
    c.q_min = q_min;
    c.q_max = q_max;
    c.positional = positional;
    return c;
}

}  // namespace

TEST_CASE("extend pads with q_min-1 symbols each side") {
    CHECK(extend("ACGT", cfg(2, 2)) == "#ACGT$");
    CHECK(extend("A", cfg(3, 3)) == "##A$$");
    CHECK(extend("ACGT", cfg(1, 1)) == "ACGT");
}

TEST_CASE("extend rejects bad input") {
    CHECK_THROWS_AS(extend("", cfg(2, 2)), EmptyInput);
    CHECK_THROWS_AS(extend("AC#GT", cfg(2, 2)), PadSymbolInInput);
    CHECK_THROWS_AS(extend("ACGT$", cfg(2, 2)), PadSymbolInInput);
}

TEST_CASE("encode_gram") {
    CHECK(encode_gram(3, "AC", true) == "3|AC");
    CHECK(encode_gram(3, "AC", false) == "AC");
    CHECK(encode_gram(12, "#A", true) == "12|#A");
    CHECK_THROWS_AS(encode_gram(1, "A|C", true), SeparatorInGram);
    CHECK_THROWS_AS(encode_gram(1, "A|C", false), SeparatorInGram);
}

TEST_CASE("encode_gram is injective over (position, gram)") {
    std::set<std::pair<std::uint64_t, std::string>> pairs;
    std::mt19937_64 rng(7);
    for (std::uint64_t pos = 1; pos <= 30; ++pos)
        for (int g = 0; g < 30; ++g) pairs.insert({pos, random_dna(1 + rng() % 5, rng())});
    std::set<std::string> encodings;
    for (const auto& [pos, gram] : pairs) encodings.insert(encode_gram(pos, gram, true));
    CHECK(pairs.size() > 500);
    CHECK(encodings.size() == pairs.size());
}

TEST_CASE("build_dictionary counts substrings") {
    std::vector<std::string> corpus = {"AAAA"};
    auto dict = build_dict(corpus, cfg(1, 2));
    CHECK(dict.count("A") == 4);
    CHECK(dict.count("AA") == 3);
    CHECK(dict.size() == 2);
}

TEST_CASE("build_dictionary prunes below threshold") {
    std::vector<std::string> corpus = {"AB"};
    auto dict = build_dict(corpus, cfg(1, 2), 2);
    CHECK(dict.size() == 0);
    CHECK_FALSE(dict.contains("A"));
}

TEST_CASE("identical corpus strings accumulate counts") {
    std::vector<std::string> corpus(100, "ACGT");
    auto dict = build_dict(corpus, cfg(1, 2), 100);
    for (std::string g : {"A", "C", "G", "T", "AC", "CG", "GT"})
        CHECK(dict.contains(g));
}

TEST_CASE("build_dictionary rejects empty corpus") {
    std::vector<std::string> corpus;
    CHECK_THROWS_AS(build_dict(corpus, cfg(1, 2)), EmptyCorpus);
}

TEST_CASE("segment greedy longest match") {
    std::vector<std::string> corpus = {"AAAA"};
    auto dict = build_dict(corpus, cfg(1, 2));

    GramSet s = segment("AAAA", dict);
    CHECK(s.elements == std::set<std::string>{"AA", "A"});
    CHECK(s.n_v == 2);
}

TEST_CASE("segment positional keeps duplicates apart") {
    GramConfig c = cfg(1, 2, true);
    std::vector<std::string> corpus = {"AAAA"};
    auto dict = build_dict(corpus, c);

    GramSet s = segment("AAAA", dict);
    CHECK(s.elements == std::set<std::string>{"1|AA", "2|AA", "3|AA", "4|A"});
    CHECK(s.n_v == 4);
}

TEST_CASE("segment falls back to the raw q_min gram") {
    std::vector<std::string> corpus = {"AAAA"};
    auto dict = build_dict(corpus, cfg(1, 1));
    GramSet s = segment("G", dict);  // "G" never seen by the dictionary
    CHECK(s.elements == std::set<std::string>{"G"});
    CHECK(s.n_v == 1);
}

TEST_CASE("segment rejects empty input") {
    std::vector<std::string> corpus = {"ACGT"};
    auto dict = build_dict(corpus, cfg(2, 3));
    CHECK_THROWS_AS(segment("", dict), EmptyInput);
}

TEST_CASE("nag bound") {
    std::vector<std::string> corpus = {"ACGT"};
    auto d40 = build_dict(corpus, cfg(2, 40));
    CHECK(nag("anything", 0, d40) == 0);
    CHECK(nag("anything", 10, d40) == 790);
    auto d1 = build_dict(corpus, cfg(1, 1));
    CHECK(nag("anything", 1, d1) == 1);
}

TEST_CASE("segment is deterministic and window-bounded") {
    std::mt19937_64 rng(11);
    GramConfig c = cfg(2, 6, true);
    std::vector<std::string> corpus;
    for (int i = 0; i < 5; ++i) corpus.push_back(random_dna(200, rng()));
    auto dict = build_dict(corpus, c, 2);

    for (int i = 0; i < 50; ++i) {
        std::string s = random_dna(1 + rng() % 100, rng());
        GramSet a = segment(s, dict);
        GramSet b = segment(s, dict);
        CHECK(a.elements == b.elements);
        CHECK(a.n_v == b.n_v);
        CHECK(a.n_v >= 1);
        CHECK(a.n_v <= extend(s, c).size() - c.q_min + 1);
    }
}

TEST_CASE("single substitution affects at most the NAG bound") {
    std::mt19937_64 rng(13);
    GramConfig c = cfg(2, 5, true);
    std::vector<std::string> corpus;
    for (int i = 0; i < 5; ++i) corpus.push_back(random_dna(300, rng()));
    auto dict = build_dict(corpus, c, 2);
    std::uint64_t bound = nag("", 1, dict);

    static constexpr char kAlphabet[] = "ACGT";
    for (int trial = 0; trial < 50; ++trial) {
        std::string s = random_dna(30 + rng() % 100, rng());
        std::string t = s;
        std::size_t pos = rng() % t.size();
        char replacement;
        do {
            replacement = kAlphabet[rng() % 4];
        } while (replacement == t[pos]);
        t[pos] = replacement;

        GramSet gs = segment(s, dict);
        GramSet gt = segment(t, dict);
        std::vector<std::string> sym_diff;
        std::set_symmetric_difference(gs.elements.begin(), gs.elements.end(),
                                      gt.elements.begin(), gt.elements.end(),
                                      std::back_inserter(sym_diff));
        CHECK(sym_diff.size() <= 2 * bound);
    }
}

TEST_CASE("corpus permutation yields an identical dictionary") {
    std::mt19937_64 rng(17);
    std::vector<std::string> corpus;
    for (int i = 0; i < 8; ++i) corpus.push_back(random_dna(50, rng()));
    GramConfig c = cfg(2, 4);

    auto a = build_dict(corpus, c, 2);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    auto b = build_dict(corpus, c, 2);

    CHECK(a.serialize() == b.serialize());
    CHECK(a.digest() == b.digest());
    CHECK(a.corpus_digest() == b.corpus_digest());
}

TEST_CASE("dictionary file roundtrip preserves everything") {
    std::mt19937_64 rng(19);
    std::vector<std::string> corpus;
    for (int i = 0; i < 4; ++i) corpus.push_back(random_dna(80, rng()));
    GramConfig c = cfg(2, 5, true);
    auto dict = build_dict(corpus, c, 2);

    Bytes data = dict.serialize();
    auto loaded = GramDictionary::deserialize(data);
    CHECK(loaded.serialize() == data);
    CHECK(loaded.config() == dict.config());
    CHECK(loaded.digest() == dict.digest());

    // Same segmentation behavior after the roundtrip.
    std::string s = random_dna(60, rng());
    CHECK(segment(s, loaded).elements == segment(s, dict).elements);
}

TEST_CASE("dictionary entries are prefix-closed and sorted") {
    std::mt19937_64 rng(23);
    std::vector<std::string> corpus;
    for (int i = 0; i < 6; ++i) corpus.push_back(random_dna(120, rng()));
    auto dict = build_dict(corpus, cfg(2, 6), 3);

    auto ents = dict.entries();
    REQUIRE(!ents.empty());
    std::set<std::string> stored;
    for (const auto& [gram, count] : ents) {
        CHECK(count >= 3);
        CHECK(gram.size() >= 2);
        CHECK(gram.size() <= 6);
        stored.insert(gram);
    }
    CHECK(std::is_sorted(ents.begin(), ents.end()));
    for (const auto& g : stored)
        if (g.size() > 2) CHECK(stored.count(g.substr(0, g.size() - 1)) == 1);
}
