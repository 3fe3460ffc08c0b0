#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "bioprep/scan.hpp"
#include "support/test_util.hpp"

using namespace bioprep;

namespace {

Vocab scan_vocab() {
    auto tokens = Vocab::special_tokens();
    for (const std::string& t :
         {"target", "filler", "alpha", "beta", "gamma", "lung", "##s"})
        tokens.push_back(t);
    return Vocab(std::move(tokens));
}

}  // namespace

TEST_CASE("sample_context_count is deterministic and in range") {
    std::map<int, int> histogram;
    for (std::uint64_t seed = 0; seed < 100000; ++seed) {
        const int m = sample_context_count("lung", seed);
        CHECK(m >= 1);
        CHECK(m <= 20);
        ++histogram[m];
    }
    CHECK(sample_context_count("lung", 42) == sample_context_count("lung", 42));
    // Each value should land near 5% of draws.
    for (int v = 1; v <= 20; ++v) {
        const double freq = histogram[v] / 100000.0;
        CHECK(freq > 0.045);
        CHECK(freq < 0.055);
    }
}

TEST_CASE("token present in exactly one sentence is always returned") {
    testutil::TempDir tmp("scan");
    testutil::write_file(tmp.file("a.txt"),
                         "filler alpha beta\nalpha target beta\nbeta gamma\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto vocab = scan_vocab();
    for (std::uint64_t seed : {0ULL, 7ULL, 99ULL}) {
        ScanOptions opts;
        opts.seed = seed;
        const auto hits = scan_for_tokens(corpus, {"target"}, vocab, opts);
        REQUIRE(hits.at("target").size() == 1);
        const auto& hit = hits.at("target")[0];
        CHECK(hit.offset == 1);
        CHECK(hit.sentence[hit.span_start] == *vocab.id_of("target"));
        CHECK(hit.span_end == hit.span_start + 1);
    }
}

TEST_CASE("token absent from the corpus gives an empty list") {
    testutil::TempDir tmp("scan");
    testutil::write_file(tmp.file("a.txt"), "filler alpha beta\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto hits = scan_for_tokens(corpus, {"target"}, scan_vocab(), {});
    CHECK(hits.at("target").empty());
}

TEST_CASE("unknown targets raise an error listing the offenders") {
    testutil::TempDir tmp("scan");
    testutil::write_file(tmp.file("a.txt"), "alpha\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    CHECK_THROWS_WITH_AS(
        scan_for_tokens(corpus, {"alpha", "nope", "also_nope"}, scan_vocab(),
                        {}),
        doctest::Contains("'nope' 'also_nope'"), std::invalid_argument);
}

TEST_CASE("every hit re-tokenizes to the target at its span") {
    testutil::TempDir tmp("scan");
    std::string content;
    Rng rng(5);
    const std::vector<std::string> fillers{"alpha", "beta", "gamma", "filler"};
    for (int i = 0; i < 300; ++i) {
        std::string line;
        for (int w = 0; w < 8; ++w) {
            if (rng.uniform_real() < 0.15)
                line += "target ";
            else
                line += fillers[rng.uniform_u64(fillers.size())] + " ";
        }
        content += line + "\n";
    }
    testutil::write_file(tmp.file("a.txt"), content);
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto vocab = scan_vocab();
    ScanOptions opts;
    opts.seed = 3;
    const auto hits = scan_for_tokens(corpus, {"target"}, vocab, opts);
    const TokenId target_id = *vocab.id_of("target");
    std::set<std::pair<std::string, std::int64_t>> sentences;
    for (const auto& hit : hits.at("target")) {
        CHECK(hit.sentence.at(hit.span_start) == target_id);
        CHECK(hit.span_end == hit.span_start + 1);
        sentences.insert({hit.shard, hit.offset});
    }
    // Sentence-level cardinality obeys the cap even though multi-occurrence
    // sentences contribute one hit per occurrence.
    CHECK(sentences.size() <= 20);
    CHECK(sentences.size() ==
          static_cast<std::size_t>(
              sample_context_count("target", opts.seed, 20)) ||
          sentences.size() < 20);
}

TEST_CASE("scan output is identical across worker counts and shardings") {
    testutil::TempDir tmp("scan");
    Rng rng(11);
    const std::vector<std::string> fillers{"alpha", "beta", "gamma"};
    for (int shard = 0; shard < 6; ++shard) {
        std::string content;
        for (int i = 0; i < 200; ++i) {
            std::string line;
            for (int w = 0; w < 6; ++w) {
                if (rng.uniform_real() < 0.2)
                    line += "target ";
                else if (rng.uniform_real() < 0.1)
                    line += "lungs ";
                else
                    line += fillers[rng.uniform_u64(fillers.size())] + " ";
            }
            content += line + "\n";
        }
        testutil::write_file(
            tmp.file("shard_" + std::to_string(shard) + ".txt"), content);
    }
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto vocab = scan_vocab();

    ScanOptions base;
    base.seed = 17;
    base.workers = 1;
    const auto reference =
        scan_for_tokens(corpus, {"target", "##s", "alpha"}, vocab, base);
    for (int workers : {2, 4, 8}) {
        ScanOptions opts = base;
        opts.workers = workers;
        const auto hits =
            scan_for_tokens(corpus, {"target", "##s", "alpha"}, vocab, opts);
        REQUIRE(hits.size() == reference.size());
        for (const auto& [token, list] : reference) {
            const auto& other = hits.at(token);
            REQUIRE(other.size() == list.size());
            for (std::size_t i = 0; i < list.size(); ++i) {
                CHECK(other[i].sentence == list[i].sentence);
                CHECK(other[i].span_start == list[i].span_start);
                CHECK(other[i].shard == list[i].shard);
                CHECK(other[i].offset == list[i].offset);
            }
        }
    }
}

TEST_CASE("reservoir selection is uniform across seeds") {
    // 100 qualifying sentences spread over 3 shards, fixed m = 20. Counts
    // over 2000 seeds; chi-square GOF against uniform with df = 99 must not
    // reject at p = 0.001 (critical value 148.23, scipy chi2.ppf(0.999, 99)).
    testutil::TempDir tmp("scan");
    int line_no = 0;
    for (int shard = 0; shard < 3; ++shard) {
        std::string content;
        const int lines = shard == 0 ? 34 : 33;
        for (int i = 0; i < lines; ++i, ++line_no)
            content += "alpha target beta\n";
        testutil::write_file(
            tmp.file("shard_" + std::to_string(shard) + ".txt"), content);
    }
    REQUIRE(line_no == 100);
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto vocab = scan_vocab();

    const int kSeeds = 2000;
    std::map<std::pair<std::string, std::int64_t>, int> counts;
    std::int64_t total = 0;
    for (int seed = 0; seed < kSeeds; ++seed) {
        ScanOptions opts;
        opts.seed = static_cast<std::uint64_t>(seed);
        opts.fixed_context_count = 20;
        const auto hits = scan_for_tokens(corpus, {"target"}, vocab, opts);
        REQUIRE(hits.at("target").size() == 20);
        for (const auto& hit : hits.at("target")) {
            ++counts[{hit.shard, hit.offset}];
            ++total;
        }
    }
    REQUIRE(total == kSeeds * 20);
    const double expected = static_cast<double>(total) / 100.0;
    double chi2 = 0.0;
    REQUIRE(counts.size() == 100);
    for (const auto& [_, c] : counts) {
        const double d = c - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 148.23035916510173);
}

TEST_CASE("hits JSONL round trip") {
    testutil::TempDir tmp("scan");
    testutil::write_file(tmp.file("a.txt"),
                         "alpha target beta\ntarget gamma target\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto vocab = scan_vocab();
    ScanOptions opts;
    opts.seed = 5;
    const auto hits = scan_for_tokens(corpus, {"target", "alpha"}, vocab, opts);
    write_hits_jsonl(hits, tmp.file("hits.jsonl"));
    const auto back = read_hits_jsonl(tmp.file("hits.jsonl"));
    REQUIRE(back.size() == hits.size());
    for (const auto& [token, list] : hits) {
        const auto& other = back.at(token);
        REQUIRE(other.size() == list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            CHECK(other[i].sentence == list[i].sentence);
            CHECK(other[i].span_start == list[i].span_start);
            CHECK(other[i].span_end == list[i].span_end);
            CHECK(other[i].shard == list[i].shard);
            CHECK(other[i].offset == list[i].offset);
        }
    }
}

TEST_CASE("a multi-occurrence sentence yields one hit per occurrence") {
    testutil::TempDir tmp("scan");
    testutil::write_file(tmp.file("a.txt"), "target alpha target\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    const auto hits = scan_for_tokens(corpus, {"target"}, scan_vocab(), {});
    REQUIRE(hits.at("target").size() == 2);
    CHECK(hits.at("target")[0].span_start == 0);
    CHECK(hits.at("target")[1].span_start == 2);
}

TEST_CASE("dedup drops repeated sentences within a shard") {
    testutil::TempDir tmp("scan");
    testutil::write_file(tmp.file("a.txt"),
                         "alpha target\nalpha target\nbeta target\n");
    const auto corpus = CorpusSource::from_dir(tmp.path());
    ScanOptions opts;
    opts.dedup_sentences = true;
    opts.fixed_context_count = 20;
    const auto hits = scan_for_tokens(corpus, {"target"}, scan_vocab(), opts);
    CHECK(hits.at("target").size() == 2);
}
