#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bioprep {

// An ordered set of UTF-8 text shards, one document per line. Shard order is
// the sorted file name order, so a corpus identifies the same document by
// (shard index, line index) on every run.
class CorpusSource {
public:
    static CorpusSource from_dir(const std::filesystem::path& dir);
    static CorpusSource from_files(std::vector<std::filesystem::path> files);

    const std::vector<std::filesystem::path>& shards() const {
        return shards_;
    }
    std::size_t shard_count() const { return shards_.size(); }
    std::string shard_name(std::size_t index) const;

    // Streams documents of one shard in order; fn(line, line_index).
    // Throws naming the shard when it cannot be read.
    void for_each_document(
        std::size_t shard_index,
        const std::function<void(std::string_view, std::int64_t)>& fn) const;

private:
    explicit CorpusSource(std::vector<std::filesystem::path> shards)
        : shards_(std::move(shards)) {}
    std::vector<std::filesystem::path> shards_;
};

namespace detail {
void run_shard_pool(std::size_t n_shards, int workers,
                    const std::function<void(std::size_t)>& task);
}

// Runs fn(shard_index) on up to `workers` threads and returns the results
// indexed by shard, so any fold over them is order-deterministic.
template <typename R, typename Fn>
std::vector<R> map_shards(const CorpusSource& corpus, int workers, Fn&& fn) {
    std::vector<R> results(corpus.shard_count());
    detail::run_shard_pool(corpus.shard_count(), workers,
                           [&](std::size_t s) { results[s] = fn(s); });
    return results;
}

struct SegmentOptions {
    // Tokens (lowercased, trailing periods removed) that block a split
    // after their period.
    std::vector<std::string> abbreviations = {
        "e.g", "i.e",  "etc", "vs",  "cf",  "al", "fig", "figs",
        "eq",  "eqs",  "ref", "refs", "dr",  "mr", "mrs", "ms",
        "prof", "st",  "no",  "approx", "ca", "resp"};
};

// Rule-based splitting: a run of sentence-final punctuation followed by
// whitespace and an uppercase letter or digit ends a sentence, unless the
// preceding token is a known abbreviation. The concatenation of the
// returned sentences with single spaces covers the document text.
std::vector<std::string> segment_sentences(std::string_view document,
                                           const SegmentOptions& opts = {});

// word -> raw count; words are case-folded, whitespace-split and stripped
// of leading/trailing punctuation.
struct FrequencyTable {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total() const;
};

FrequencyTable count_frequencies(const CorpusSource& corpus, int workers);

// Splits one line into frequency-table words (the definition above).
std::vector<std::string> frequency_words(std::string_view line);

// TSV `word \t count`, count descending, ties lexicographic.
void write_frequency_tsv(const FrequencyTable& table,
                         const std::filesystem::path& path);
FrequencyTable read_frequency_tsv(const std::filesystem::path& path);

}  // namespace bioprep
