#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bioprep/corpus.hpp"
#include "bioprep/wordpiece.hpp"

namespace bioprep {

// One occurrence of a target token inside a sampled sentence.
struct SentenceHit {
    std::vector<TokenId> sentence;  // domain-tokenizer ids
    int span_start = 0;             // [start, end) within sentence
    int span_end = 0;
    std::string shard;              // shard file name
    std::int64_t offset = 0;        // document line index within the shard
};

struct ScanOptions {
    int cap = 20;        // upper bound for the per-token context count
    std::uint64_t seed = 0;
    int workers = 1;
    bool dedup_sentences = false;  // drop repeated sentences within a shard
    // > 0 pins every token's context count instead of sampling it per
    // token (the one-global-m reading).
    int fixed_context_count = 0;
    TokenizerOptions tokenizer;
    SegmentOptions segmenter;
};

// token -> hits, ordered by token for stable serialization.
using ScanResult = std::map<std::string, std::vector<SentenceHit>>;

// Uniform over {1, ..., upper}; pure function of (token, seed).
int sample_context_count(std::string_view token, std::uint64_t seed,
                         int upper = 20);

// Samples, for each target, sample_context_count(target, seed) sentences
// uniformly from all sentences whose domain tokenization contains the
// target id (each sentence counted once however often the token repeats;
// every occurrence inside a sampled sentence yields its own hit). Shards
// are scanned in parallel; per-shard reservoirs carry their qualifying
// counts and are folded in shard order with a weighted merge, so output is
// identical for every worker count. Targets absent from the vocabulary are
// an error listing the offenders; targets absent from the corpus map to an
// empty hit list.
ScanResult scan_for_tokens(const CorpusSource& corpus,
                           const std::vector<std::string>& targets,
                           const Vocab& vocab, const ScanOptions& options);

void write_hits_jsonl(const ScanResult& hits,
                      const std::filesystem::path& path);
ScanResult read_hits_jsonl(const std::filesystem::path& path);

}  // namespace bioprep
