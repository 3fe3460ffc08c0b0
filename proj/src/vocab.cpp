#include "bioprep/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "bioprep/rng.hpp"

namespace bioprep {

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    ids_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const auto& t = tokens_[i];
        if (t.empty()) throw std::invalid_argument("vocab: empty token");
        auto [_, inserted] = ids_.emplace(t, static_cast<TokenId>(i));
        if (!inserted)
            throw std::invalid_argument("vocab: duplicate token '" + t + "'");
    }
    auto require = [&](std::string_view name) {
        auto it = ids_.find(name);
        if (it == ids_.end())
            throw std::invalid_argument("vocab: missing special token " +
                                        std::string(name));
        return it->second;
    };
    specials_.pad = require(kPadToken);
    specials_.unk = require(kUnkToken);
    specials_.cls = require(kClsToken);
    specials_.sep = require(kSepToken);
    specials_.mask = require(kMaskToken);
    sorted_special_ids_ = {specials_.pad, specials_.unk, specials_.cls,
                           specials_.sep, specials_.mask};
    std::sort(sorted_special_ids_.begin(), sorted_special_ids_.end());
    if (tokens_.size() < 6)
        throw std::invalid_argument("vocab: no non-special tokens");
}

Vocab Vocab::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw std::runtime_error("vocab: cannot open " + file.string());
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokens.push_back(line);
    }
    return Vocab(std::move(tokens));
}

void Vocab::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw std::runtime_error("vocab: cannot write " + file.string());
    for (const auto& t : tokens_) out << t << '\n';
    if (!out) throw std::runtime_error("vocab: write failed " + file.string());
}

std::vector<std::string> Vocab::special_tokens() {
    return {std::string(kPadToken), std::string(kUnkToken),
            std::string(kClsToken), std::string(kSepToken),
            std::string(kMaskToken)};
}

std::optional<TokenId> Vocab::id_of(std::string_view token) const {
    auto it = ids_.find(token);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

bool Vocab::is_special(TokenId id) const {
    return std::binary_search(sorted_special_ids_.begin(),
                              sorted_special_ids_.end(), id);
}

bool Vocab::is_continuation(TokenId id) const {
    return is_continuation(tokens_.at(id));
}

bool Vocab::is_continuation(std::string_view token) {
    return token.size() > 2 && token.substr(0, 2) == kContinuationPrefix;
}

TokenId Vocab::non_special_at(std::uint64_t r) const {
    auto id = static_cast<TokenId>(r);
    for (TokenId s : sorted_special_ids_)
        if (id >= s) ++id;
    return id;
}

std::uint64_t Vocab::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : tokens_) {
        h = fnv1a(t, h);
        h = fnv1a("\n", h);
    }
    return h;
}

}  // namespace bioprep
