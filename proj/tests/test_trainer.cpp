#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "bioprep/wordpiece.hpp"
#include "support/test_util.hpp"

using namespace bioprep;

namespace {

CorpusSource one_shard(const testutil::TempDir& tmp,
                       const std::string& content) {
    testutil::write_file(tmp.file("shard_000.txt"), content);
    return CorpusSource::from_dir(tmp.path());
}

}  // namespace

TEST_CASE("one repeated word collapses to a full token") {
    testutil::TempDir tmp("trainer");
    const auto corpus = one_shard(tmp, "lung lung lung lung\nlung lung\n");
    const auto vocab = train_vocab(corpus, 40);
    CHECK(vocab.contains("lung"));
    CHECK(vocab.size() <= 40);
}

TEST_CASE("vocabulary never exceeds the target size") {
    testutil::TempDir tmp("trainer");
    const auto corpus = one_shard(
        tmp, "alpha beta gamma delta epsilon\nzeta eta theta iota kappa\n");
    for (std::size_t target : {60, 80, 200}) {
        const auto vocab = train_vocab(corpus, target);
        CHECK(vocab.size() <= target);
    }
}

TEST_CASE("empty corpus is an error") {
    testutil::TempDir tmp("trainer");
    const auto corpus = one_shard(tmp, "");
    CHECK_THROWS(train_vocab(corpus, 50));
}

TEST_CASE("target below specials + alphabet is an error") {
    testutil::TempDir tmp("trainer");
    const auto corpus = one_shard(tmp, "abcdefgh ijklmnop\n");
    CHECK_THROWS(train_vocab(corpus, 10));
}

TEST_CASE("trained tokens match the reference scorer output") {
    const auto corpus = CorpusSource::from_files(
        {testutil::data_dir() / "trainer_corpus.txt"});
    const auto vocab = train_vocab(corpus, 120);

    std::ifstream expected_file(testutil::data_dir() /
                                "trainer_expected_vocab.txt");
    REQUIRE(expected_file.good());
    std::vector<std::string> expected;
    std::string line;
    while (std::getline(expected_file, line)) expected.push_back(line);

    REQUIRE(vocab.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(vocab.token(static_cast<TokenId>(i)) == expected[i]);
}

TEST_CASE("training is deterministic across runs and worker counts") {
    const auto corpus = CorpusSource::from_files(
        {testutil::data_dir() / "trainer_corpus.txt"});
    const auto v1 = train_vocab(corpus, 90);
    const auto v2 = train_vocab(corpus, 90);
    TrainerOptions par;
    par.workers = 4;
    const auto v3 = train_vocab(corpus, 90, par);
    CHECK(v1.tokens() == v2.tokens());
    CHECK(v1.tokens() == v3.tokens());
}
