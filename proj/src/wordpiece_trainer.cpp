#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "bioprep/unicode.hpp"
#include "bioprep/wordpiece.hpp"

namespace bioprep {

namespace {

struct WordEntry {
    std::vector<std::string> symbols;
    std::uint64_t count = 0;
};

// Fusing (left, right) drops the continuation prefix of the right part.
std::string fuse(const std::string& left, const std::string& right) {
    return left + right.substr(2);
}

}  // namespace

Vocab train_vocab(const CorpusSource& corpus, std::size_t target_size,
                  const TrainerOptions& opts) {
    // Word counting parallelizes over shards; the merge is exact addition,
    // so the result does not depend on the worker count.
    auto partials = map_shards<std::unordered_map<std::string, std::uint64_t>>(
        corpus, opts.workers, [&](std::size_t s) {
            std::unordered_map<std::string, std::uint64_t> local;
            corpus.for_each_document(s, [&](std::string_view doc, std::int64_t) {
                for (auto& w : pre_tokenize(doc, opts.tokenizer)) ++local[w];
            });
            return local;
        });
    std::unordered_map<std::string, std::uint64_t> word_counts;
    for (auto& p : partials)
        for (auto& [w, c] : p) word_counts[w] += c;
    if (word_counts.empty())
        throw std::runtime_error("train_vocab: empty corpus");

    std::vector<WordEntry> words;
    words.reserve(word_counts.size());
    std::map<std::string, bool> alphabet;  // ordered for the seed segment
    for (auto& [w, c] : word_counts) {
        WordEntry entry;
        entry.count = c;
        const auto cps = uni::decode_all(w);
        for (std::size_t k = 0; k < cps.size(); ++k) {
            std::string sym = k == 0 ? "" : "##";
            uni::encode(cps[k], sym);
            alphabet[sym] = true;
            entry.symbols.push_back(std::move(sym));
        }
        words.push_back(std::move(entry));
    }
    // Words in a fixed order keeps the whole procedure reproducible even
    // though pair selection is order-independent anyway.
    std::sort(words.begin(), words.end(),
              [](const WordEntry& a, const WordEntry& b) {
                  return a.symbols < b.symbols;
              });

    std::vector<std::string> vocab_tokens = Vocab::special_tokens();
    for (const auto& [sym, _] : alphabet) vocab_tokens.push_back(sym);
    if (target_size <= vocab_tokens.size())
        throw std::runtime_error(
            "train_vocab: target_size " + std::to_string(target_size) +
            " not above specials + alphabet (" +
            std::to_string(vocab_tokens.size()) + ")");

    std::unordered_map<std::string, bool> in_vocab;
    for (const auto& t : vocab_tokens) in_vocab[t] = true;

    while (vocab_tokens.size() < target_size) {
        // Recount symbols and adjacent pairs over the current segmentation.
        std::unordered_map<std::string, std::uint64_t> sym_counts;
        std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;
        for (const auto& w : words) {
            for (const auto& s : w.symbols) sym_counts[s] += w.count;
            for (std::size_t k = 0; k + 1 < w.symbols.size(); ++k)
                pairs[{w.symbols[k], w.symbols[k + 1]}] += w.count;
        }

        const std::pair<std::string, std::string>* best = nullptr;
        double best_score = 0.0;
        std::string best_fused;
        for (const auto& [pair, c] : pairs) {
            if (c < 2) continue;
            std::string fused = fuse(pair.first, pair.second);
            const double score =
                static_cast<double>(c) /
                (static_cast<double>(sym_counts[pair.first]) *
                 static_cast<double>(sym_counts[pair.second]));
            const bool better =
                !best || score > best_score ||
                (score == best_score &&
                 (fused < best_fused ||
                  (fused == best_fused && pair.first < best->first)));
            if (better) {
                best = &pair;
                best_score = score;
                best_fused = std::move(fused);
            }
        }
        if (!best) break;

        // Two distinct pairs can fuse to the same string; the segmentation
        // still applies the merge, the vocabulary gains it only once.
        const auto [left, right] = *best;
        if (!in_vocab.count(best_fused)) {
            vocab_tokens.push_back(best_fused);
            in_vocab[best_fused] = true;
        }
        for (auto& w : words) {
            auto& syms = w.symbols;
            for (std::size_t k = 0; k + 1 < syms.size();) {
                if (syms[k] == left && syms[k + 1] == right) {
                    syms[k] = best_fused;
                    syms.erase(syms.begin() + k + 1);
                } else {
                    ++k;
                }
            }
        }
    }
    return Vocab(std::move(vocab_tokens));
}

}  // namespace bioprep
