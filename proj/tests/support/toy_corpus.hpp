#pragma once

// A small synthetic language with word structure and strong bigram
// statistics: every word is a head piece plus 0-2 deterministic
// continuation pieces, and word order follows a peaked Markov chain. Both
// the curriculum tests and the difficulty-ranking oracle consume exactly
// this corpus (see tests/oracle/).

#include <string>
#include <vector>

#include "bioprep/rng.hpp"
#include "bioprep/vocab.hpp"

namespace testutil {

inline constexpr int kToyWordCount = 40;
inline constexpr std::uint64_t kToyCorpusSeed = 20240101;

inline bioprep::Vocab toy_vocab() {
    auto tokens = bioprep::Vocab::special_tokens();
    for (int k = 0; k < kToyWordCount; ++k) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "w%02d", k);
        tokens.emplace_back(buf);
    }
    for (int k = 0; k < kToyWordCount; ++k) {
        char buf[10];
        std::snprintf(buf, sizeof(buf), "##c%02d", k);
        tokens.emplace_back(buf);
    }
    return bioprep::Vocab(std::move(tokens));
}

// Piece ids of word k under toy_vocab (specials occupy ids 0-4).
inline std::vector<bioprep::TokenId> toy_word_pieces(int k) {
    const bioprep::TokenId head = 5 + k;
    const bioprep::TokenId cont0 = 5 + kToyWordCount + k;
    const bioprep::TokenId cont1 = 5 + kToyWordCount + (k * 7 + 3) % kToyWordCount;
    switch (k % 3) {
        case 0: return {head};
        case 1: return {head, cont0};
        default: return {head, cont0, cont1};
    }
}

inline std::vector<std::vector<bioprep::TokenId>> toy_corpus(
    std::size_t min_tokens = 100000,
    std::uint64_t seed = kToyCorpusSeed) {
    bioprep::Rng rng(seed);
    std::vector<std::vector<bioprep::TokenId>> sequences;
    std::size_t total = 0;
    while (total < min_tokens) {
        const auto n_words = 12 + rng.uniform_u64(8);
        std::vector<bioprep::TokenId> seq;
        int word = static_cast<int>(rng.uniform_u64(kToyWordCount));
        for (std::uint64_t w = 0; w < n_words; ++w) {
            for (bioprep::TokenId id : toy_word_pieces(word)) seq.push_back(id);
            // Peaked successor: 60% the chain, else uniform.
            if (rng.uniform_real() < 0.6)
                word = (word * 13 + 7) % kToyWordCount;
            else
                word = static_cast<int>(rng.uniform_u64(kToyWordCount));
        }
        total += seq.size();
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

inline std::uint64_t toy_corpus_hash(
    const std::vector<std::vector<bioprep::TokenId>>& corpus) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& seq : corpus) {
        for (bioprep::TokenId id : seq) {
            h = bioprep::fnv1a(std::to_string(id), h);
            h = bioprep::fnv1a(",", h);
        }
        h = bioprep::fnv1a(";", h);
    }
    return h;
}

}  // namespace testutil
