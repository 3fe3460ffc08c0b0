#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "bioprep/corpus.hpp"
#include "bioprep/rng.hpp"
#include "support/test_util.hpp"

using namespace bioprep;

TEST_CASE("two terminal periods give two sentences") {
    CHECK(segment_sentences("A b. C d.") ==
          std::vector<std::string>{"A b.", "C d."});
}

TEST_CASE("empty document gives no sentences") {
    CHECK(segment_sentences("").empty());
    CHECK(segment_sentences("   ").empty());
}

TEST_CASE("no split without following uppercase or digit") {
    CHECK(segment_sentences("version 2.5 of the kit. the rest") ==
          std::vector<std::string>{"version 2.5 of the kit. the rest"});
    CHECK(segment_sentences("One! Two? three") ==
          std::vector<std::string>{"One!", "Two? three"});
}

TEST_CASE("segmentation covers the document") {
    const std::string doc = "First rule. Second rule! Third? Yes. tail text";
    const auto sentences = segment_sentences(doc);
    std::string joined;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i) joined += ' ';
        joined += sentences[i];
    }
    CHECK(joined == doc);
}

TEST_CASE("the hand-segmented fixture splits into 5 sentences") {
    std::ifstream fixture(testutil::data_dir() / "segmentation_fixture.txt");
    REQUIRE(fixture.good());
    std::string doc;
    std::getline(fixture, doc);

    std::ifstream expected_file(testutil::data_dir() /
                                "segmentation_expected.txt");
    REQUIRE(expected_file.good());
    std::vector<std::string> expected;
    std::string line;
    while (std::getline(expected_file, line))
        if (!line.empty()) expected.push_back(line);
    REQUIRE(expected.size() == 5);

    CHECK(segment_sentences(doc) == expected);
}

TEST_CASE("frequency words are case-folded and punctuation-stripped") {
    CHECK(frequency_words("The cat, the CAT.") ==
          std::vector<std::string>{"the", "cat", "the", "cat"});
    CHECK(frequency_words("(lung) -- [test]") ==
          std::vector<std::string>{"lung", "test"});
    CHECK(frequency_words("!!!").empty());
    // Internal punctuation stays.
    CHECK(frequency_words("e.g. anti-body") ==
          std::vector<std::string>{"e.g", "anti-body"});
}

TEST_CASE("simple corpus counts") {
    testutil::TempDir tmp("freq");
    testutil::write_file(tmp.file("a.txt"), "a a a b\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto table = count_frequencies(corpus, 1);
    REQUIRE(table.counts.size() == 2);
    CHECK(table.counts.at("a") == 3);
    CHECK(table.counts.at("b") == 1);
    CHECK(table.total() == 4);
}

TEST_CASE("empty corpus counts nothing") {
    testutil::TempDir tmp("freq");
    testutil::write_file(tmp.file("a.txt"), "");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    CHECK(count_frequencies(corpus, 2).counts.empty());
}

TEST_CASE("parallel counting equals the serial reference") {
    testutil::TempDir tmp("freq");
    // ~1 MB across several shards.
    const std::vector<std::string> dictionary = {
        "lung",    "cell",   "tissue", "assay",  "marker", "patient",
        "chronic", "biopsy", "level",  "sample", "the",    "of"};
    for (int shard = 0; shard < 5; ++shard) {
        std::string content;
        Rng rng(1000 + shard);
        while (content.size() < 200 * 1024) {
            const auto words = 5 + rng.uniform_u64(8);
            for (std::uint64_t w = 0; w < words; ++w) {
                content += dictionary[rng.uniform_u64(dictionary.size())];
                content += ' ';
            }
            content += '\n';
        }
        testutil::write_file(
            tmp.file("shard_" + std::to_string(shard) + ".txt"), content);
    }
    const auto corpus = CorpusSource::from_dir(tmp.path());

    // Serial oracle: one pass, no shard machinery.
    FrequencyTable reference;
    for (std::size_t s = 0; s < corpus.shard_count(); ++s)
        corpus.for_each_document(s, [&](std::string_view doc, std::int64_t) {
            for (auto& w : frequency_words(doc)) ++reference.counts[w];
        });

    for (int workers : {1, 2, 8}) {
        const auto table = count_frequencies(corpus, workers);
        CHECK(table.counts == reference.counts);
    }
}

TEST_CASE("unreadable shard errors name the shard") {
    const auto corpus = CorpusSource::from_files({"/nonexistent/shard.txt"});
    CHECK_THROWS_WITH_AS(count_frequencies(corpus, 1),
                         doctest::Contains("shard.txt"), std::runtime_error);
}

TEST_CASE("frequency TSV is sorted by count then word") {
    testutil::TempDir tmp("freq");
    FrequencyTable table;
    table.counts = {{"beta", 3}, {"alpha", 3}, {"zeta", 10}, {"mu", 1}};
    write_frequency_tsv(table, tmp.file("freq.tsv"));
    CHECK(testutil::read_file(tmp.file("freq.tsv")) ==
          "zeta\t10\nalpha\t3\nbeta\t3\nmu\t1\n");
    const auto back = read_frequency_tsv(tmp.file("freq.tsv"));
    CHECK(back.counts == table.counts);
}
