#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bioprep/analysis.hpp"
#include "bioprep/curriculum.hpp"
#include "bioprep/masking.hpp"
#include "bioprep/wordpiece.hpp"

namespace bioprep {

// All knobs of the pipeline in one place; populated from a key = value
// config file and per-flag CLI overrides. Seeds are always explicit.
struct RunConfig {
    // paths
    std::string corpus_dir;
    std::string base_vocab;
    std::string domain_vocab;
    std::string base_matrix;

    // tokenizer
    TokenizerOptions tokenizer;

    // scan
    int scan_cap = 20;
    bool scan_dedup = false;
    std::string segmenter = "rule-based";

    // masking (Table-style keys: masking_strategy, masking_rate,
    // corruption_strategy)
    MaskingConfig masking;

    // curriculum
    std::int64_t phase_base_steps = 1000;
    std::vector<std::int64_t> phase_steps;  // overrides the ratio default
    double peak_lr = 1e-4;
    double warmup_proportion = 0.06;

    // analysis
    FrequencyBoundaries boundaries;

    // packing
    int max_len = 128;

    // common
    std::uint64_t seed = 0;
    int workers = 1;

    // raw key/value view (for hashing and the reproducibility stanza)
    std::map<std::string, std::string> raw;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys are
// reported by validate(), not silently dropped.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_pairs(
    const std::map<std::string, std::string>& pairs);

// Collects every problem (bad values, unknown keys, missing paths that the
// given requirements name) instead of stopping at the first.
std::vector<std::string> validate_config(
    const RunConfig& config, const std::vector<std::string>& required_paths);

// FNV-1a over the canonical sorted key=value rendering.
std::uint64_t config_hash(const RunConfig& config);

// Cuts documents into [CLS] ... [SEP] sequences of at most max_len ids.
// Sentences are tokenized and packed greedily within a document; a single
// sentence longer than the budget is split hard. No cross-document packing.
std::vector<std::vector<TokenId>> pack_sequences(const CorpusSource& corpus,
                                                 const Vocab& vocab,
                                                 int max_len,
                                                 const TokenizerOptions& opts,
                                                 const SegmentOptions& seg = {});

}  // namespace bioprep
