#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "bioprep/rng.hpp"
#include "bioprep/wordpiece.hpp"
#include "support/test_util.hpp"

using namespace bioprep;

namespace {

Vocab make_vocab(std::vector<std::string> extra) {
    auto tokens = Vocab::special_tokens();
    tokens.insert(tokens.end(), extra.begin(), extra.end());
    return Vocab(std::move(tokens));
}

// The six-piece example vocabulary: no longer prefixes exist, so greedy
// matching must reproduce exactly these pieces.
Vocab bronchoconstriction_vocab() {
    return make_vocab({"bro", "##nch", "##oco", "##nst", "##ric", "##tion",
                       "the", "cat", "lung", "##s"});
}

std::vector<std::string> pieces_of(const std::vector<TokenId>& ids,
                                   const Vocab& v) {
    std::vector<std::string> out;
    for (TokenId id : ids) out.push_back(v.token(id));
    return out;
}

}  // namespace

TEST_CASE("vocab invariants") {
    CHECK_THROWS_AS(Vocab({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "a"}),
                    std::invalid_argument);  // missing [MASK]
    CHECK_THROWS_AS(
        Vocab({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "a", "a"}),
        std::invalid_argument);  // duplicate
    const auto v = make_vocab({"a", "b"});
    CHECK(v.size() == 7);
    CHECK(v.id_of("a") == TokenId{5});
    CHECK(v.id_of("zzz") == std::nullopt);
    CHECK(v.is_special(v.specials().mask));
    CHECK_FALSE(v.is_special(5));
}

TEST_CASE("vocab file round trip preserves ids") {
    testutil::TempDir tmp("vocab");
    const auto v = make_vocab({"alpha", "##beta", "gamma"});
    v.save(tmp.file("vocab.txt"));
    const auto loaded = Vocab::load(tmp.file("vocab.txt"));
    REQUIRE(loaded.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(loaded.token(static_cast<TokenId>(i)) ==
              v.token(static_cast<TokenId>(i)));
    CHECK(loaded.content_hash() == v.content_hash());
}

TEST_CASE("greedy encoding splits the paper example into six pieces") {
    const auto v = bronchoconstriction_vocab();
    const auto ids = encode("bronchoconstriction", v);
    CHECK(pieces_of(ids, v) ==
          std::vector<std::string>{"bro", "##nch", "##oco", "##nst", "##ric",
                                   "##tion"});
}

TEST_CASE("a word present verbatim is one token") {
    const auto v = bronchoconstriction_vocab();
    const auto ids = encode("lung", v);
    REQUIRE(ids.size() == 1);
    CHECK(v.token(ids[0]) == "lung");
    // And continuation matching still applies past it.
    CHECK(pieces_of(encode("lungs", v), v) ==
          std::vector<std::string>{"lung", "##s"});
}

TEST_CASE("unmatchable words become a single UNK") {
    const auto v = bronchoconstriction_vocab();
    const auto ids = encode("∆∆∆", v);
    REQUIRE(ids.size() == 1);
    CHECK(ids[0] == v.specials().unk);
}

TEST_CASE("overlong words become UNK") {
    const auto v = make_vocab({"a"});
    const std::string word(101, 'a');
    const auto ids = encode(word, v);
    REQUIRE(ids.size() == 1);
    CHECK(ids[0] == v.specials().unk);
    CHECK(encode(std::string(100, 'a'), v).size() == 100);
}

TEST_CASE("normalization: lowercase, accents, punctuation, cjk") {
    const auto v = make_vocab({"bro", "##nch", "über", "uber", "!", "头"});
    TokenizerOptions opts;
    CHECK(pieces_of(encode("BRONCH", v, opts), v) ==
          std::vector<std::string>{"bro", "##nch"});
    // NFD strip: "Über" -> "uber"
    CHECK(pieces_of(encode("Über", v, opts), v) ==
          std::vector<std::string>{"uber"});
    opts.strip_accents = false;
    CHECK(pieces_of(encode("Über", v, opts), v) ==
          std::vector<std::string>{"über"});
    // Punctuation splits off.
    CHECK(pre_tokenize("bro!nch", opts) ==
          std::vector<std::string>{"bro", "!", "nch"});
    // CJK per-char split.
    CHECK(pre_tokenize("头头", opts) == std::vector<std::string>{"头", "头"});
    opts.split_cjk = false;
    CHECK(pre_tokenize("头头", opts) == std::vector<std::string>{"头头"});
}

TEST_CASE("encode is pure and decode round-trips encodable words") {
    const auto v = make_vocab({"bro", "##nch", "##oco", "lung", "##s", "a",
                               "##b", "##c"});
    Rng rng(99);
    const std::vector<std::string> heads{"bro", "lung", "a"};
    const std::vector<std::string> conts{"nch", "oco", "s", "b", "c"};
    for (int iter = 0; iter < 200; ++iter) {
        std::string word = heads[rng.uniform_u64(heads.size())];
        const auto n = rng.uniform_u64(3);
        for (std::uint64_t k = 0; k < n; ++k)
            word += conts[rng.uniform_u64(conts.size())];
        const auto ids = encode(word, v);
        if (std::find(ids.begin(), ids.end(), v.specials().unk) != ids.end())
            continue;
        CHECK(decode(ids, v) == word);
        CHECK(encode(word, v) == ids);
    }
}

TEST_CASE("decoding a continuation-led span keeps its prefix") {
    const auto v = bronchoconstriction_vocab();
    CHECK(decode({*v.id_of("##tion")}, v) == "##tion");
    CHECK(decode({*v.id_of("the"), *v.id_of("cat")}, v) == "the cat");
}

TEST_CASE("word_groups covers the six-piece word as one group") {
    const auto v = bronchoconstriction_vocab();
    const auto ids = encode("bronchoconstriction", v);
    const auto groups = word_groups(ids, v);
    CHECK(groups.ranges ==
          std::vector<std::pair<int, int>>{{0, 6}});
}

TEST_CASE("word_groups skips specials") {
    const auto v = bronchoconstriction_vocab();
    const std::vector<TokenId> ids{v.specials().cls, *v.id_of("the"),
                                   *v.id_of("cat"), v.specials().sep};
    const auto groups = word_groups(ids, v);
    CHECK(groups.ranges ==
          std::vector<std::pair<int, int>>{{1, 2}, {2, 3}});
}

TEST_CASE("word_groups matches the hand annotation on a mixed sequence") {
    const auto v = bronchoconstriction_vocab();
    // [CLS] lung ##s the bro ##nch ##oco cat [SEP] ##tion-after-special is
    // covered by the error case below; here every continuation has a head.
    const std::vector<TokenId> ids{
        v.specials().cls,  *v.id_of("lung"), *v.id_of("##s"),
        *v.id_of("the"),   *v.id_of("bro"),  *v.id_of("##nch"),
        *v.id_of("##oco"), *v.id_of("cat"),  v.specials().sep,
        *v.id_of("lung")};
    const auto groups = word_groups(ids, v);
    CHECK(groups.ranges == std::vector<std::pair<int, int>>{
                               {1, 3}, {3, 4}, {4, 7}, {7, 8}, {9, 10}});
    // Partition check: ranges cover exactly the non-special positions.
    std::vector<bool> covered(ids.size(), false);
    for (const auto& [s, e] : groups.ranges)
        for (int p = s; p < e; ++p) {
            CHECK_FALSE(covered[p]);
            covered[p] = true;
        }
    for (std::size_t p = 0; p < ids.size(); ++p)
        CHECK(covered[p] == !v.is_special(ids[p]));
}

TEST_CASE("a leading continuation token is an error") {
    const auto v = bronchoconstriction_vocab();
    CHECK_THROWS_AS(word_groups({*v.id_of("##tion")}, v),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        word_groups({v.specials().cls, *v.id_of("##tion")}, v),
        std::invalid_argument);
}
