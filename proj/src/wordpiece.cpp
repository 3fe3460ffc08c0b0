#include "bioprep/wordpiece.hpp"

#include <stdexcept>

#include "bioprep/unicode.hpp"

namespace bioprep {

std::vector<std::string> pre_tokenize(std::string_view text,
                                      const TokenizerOptions& opts) {
    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            words.push_back(current);
            current.clear();
        }
    };
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = uni::decode(text, i);
        if (cp == 0 || uni::is_control(cp)) continue;
        if (opts.strip_accents) {
            cp = uni::strip_accent(cp);
            if (cp == 0) continue;
        }
        if (opts.lowercase) cp = uni::to_lower(cp);
        if (uni::is_whitespace(cp)) {
            flush();
            continue;
        }
        if (uni::is_punctuation(cp) || (opts.split_cjk && uni::is_cjk(cp))) {
            flush();
            std::string single;
            uni::encode(cp, single);
            words.push_back(std::move(single));
            continue;
        }
        uni::encode(cp, current);
    }
    flush();
    return words;
}

std::vector<TokenId> encode_word(std::string_view word, const Vocab& vocab,
                                 bool continuation,
                                 const TokenizerOptions& opts) {
    const TokenId unk = vocab.specials().unk;
    if (word.empty()) return {};

    // Byte offset of each code point, plus the end sentinel.
    std::vector<std::size_t> offsets;
    {
        std::size_t i = 0;
        while (i < word.size()) {
            offsets.push_back(i);
            uni::decode(word, i);
        }
        offsets.push_back(word.size());
    }
    const std::size_t n_chars = offsets.size() - 1;
    if (n_chars > opts.max_word_chars) return {unk};

    std::vector<TokenId> pieces;
    std::string candidate;
    std::size_t start = 0;
    while (start < n_chars) {
        const bool prefixed = continuation || start > 0;
        std::size_t end = n_chars;
        TokenId matched = -1;
        while (end > start) {
            candidate.assign(prefixed ? "##" : "");
            candidate.append(word.substr(offsets[start],
                                         offsets[end] - offsets[start]));
            if (auto id = vocab.id_of(candidate)) {
                matched = *id;
                break;
            }
            --end;
        }
        if (matched < 0) return {unk};
        pieces.push_back(matched);
        start = end;
    }
    return pieces;
}

std::vector<TokenId> encode(std::string_view text, const Vocab& vocab,
                            const TokenizerOptions& opts) {
    std::vector<TokenId> ids;
    for (const auto& word : pre_tokenize(text, opts)) {
        auto pieces = encode_word(word, vocab, false, opts);
        ids.insert(ids.end(), pieces.begin(), pieces.end());
    }
    return ids;
}

std::string decode(const std::vector<TokenId>& ids, const Vocab& vocab) {
    std::string out;
    bool first = true;
    for (TokenId id : ids) {
        const std::string& tok = vocab.token(id);
        if (!first && Vocab::is_continuation(tok)) {
            out.append(tok, 2, std::string::npos);
        } else {
            if (!first) out.push_back(' ');
            out.append(tok);
        }
        first = false;
    }
    return out;
}

WordGroup word_groups(const std::vector<TokenId>& ids, const Vocab& vocab) {
    WordGroup groups;
    int open_start = -1;
    auto close = [&](int end) {
        if (open_start >= 0) {
            groups.ranges.emplace_back(open_start, end);
            open_start = -1;
        }
    };
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
        const TokenId id = ids[i];
        if (vocab.is_special(id)) {
            close(i);
            continue;
        }
        if (vocab.is_continuation(id)) {
            if (open_start < 0)
                throw std::invalid_argument(
                    "word_groups: continuation token '" + vocab.token(id) +
                    "' at position " + std::to_string(i) + " has no head");
            continue;
        }
        close(i);
        open_start = i;
    }
    close(static_cast<int>(ids.size()));
    return groups;
}

}  // namespace bioprep
