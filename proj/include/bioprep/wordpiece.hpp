#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bioprep/corpus.hpp"
#include "bioprep/vocab.hpp"

namespace bioprep {

struct TokenizerOptions {
    bool lowercase = true;
    bool strip_accents = true;
    bool split_cjk = true;
    // Words longer than this (in code points) become a single [UNK].
    std::size_t max_word_chars = 100;
};

// Normalization plus word splitting: whitespace-delimited, punctuation and
// (optionally) CJK characters split off as single-character words.
std::vector<std::string> pre_tokenize(std::string_view text,
                                      const TokenizerOptions& opts = {});

// Greedy longest-prefix pieces of one normalized word. `continuation` marks
// a mid-word fragment: the first piece is then matched with the "##" prefix
// as well. Unmatchable input yields the single [UNK] id.
std::vector<TokenId> encode_word(std::string_view word, const Vocab& vocab,
                                 bool continuation = false,
                                 const TokenizerOptions& opts = {});

std::vector<TokenId> encode(std::string_view text, const Vocab& vocab,
                            const TokenizerOptions& opts = {});

// Joins pieces back into words; a leading continuation piece keeps its "##"
// so that decoding a span reproduces the exact token.
std::string decode(const std::vector<TokenId>& ids, const Vocab& vocab);

struct WordGroup {
    // [start, end) subtoken ranges, one per surface word; disjoint, ordered,
    // covering every non-special position.
    std::vector<std::pair<int, int>> ranges;
};

// Throws std::invalid_argument on a continuation token with no head (at the
// sequence start or directly after a special).
WordGroup word_groups(const std::vector<TokenId>& ids, const Vocab& vocab);

struct TrainerOptions {
    TokenizerOptions tokenizer;
    int workers = 1;
};

// Trains a vocabulary of at most target_size tokens: specials, then the
// corpus alphabet, then merges in the order they were learned. Each round
// fuses the adjacent symbol pair maximizing
//   count(pair) / (count(left) * count(right)),
// stopping when the vocabulary is full or no pair occurs twice. Ties break
// on the lexicographically smaller merged string, then left symbol, so the
// result is identical across runs and worker counts.
Vocab train_vocab(const CorpusSource& corpus, std::size_t target_size,
                  const TrainerOptions& opts = {});

}  // namespace bioprep
