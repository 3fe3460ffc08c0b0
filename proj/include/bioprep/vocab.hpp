#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bioprep {

using TokenId = std::int32_t;

inline constexpr std::string_view kContinuationPrefix = "##";
inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";

struct SpecialIds {
    TokenId pad = -1;
    TokenId unk = -1;
    TokenId cls = -1;
    TokenId sep = -1;
    TokenId mask = -1;
};

// Immutable token inventory. Ids are dense in [0, size()); the five special
// tokens must each appear exactly once. Lookups are thread-safe.
class Vocab {
public:
    // Validates the invariants above; throws std::invalid_argument.
    explicit Vocab(std::vector<std::string> tokens);

    // Standard vocab.txt convention: one token per line, line number = id.
    static Vocab load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    // The conventional seed list for new vocabularies: specials at ids 0-4.
    static std::vector<std::string> special_tokens();

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::optional<TokenId> id_of(std::string_view token) const;
    bool contains(std::string_view token) const {
        return id_of(token).has_value();
    }

    const SpecialIds& specials() const { return specials_; }
    bool is_special(TokenId id) const;
    bool is_continuation(TokenId id) const;
    static bool is_continuation(std::string_view token);

    // Draws uniformly over non-special ids; `r` must be in
    // [0, size() - 5).
    TokenId non_special_at(std::uint64_t r) const;
    std::size_t non_special_count() const { return tokens_.size() - 5; }

    // FNV-1a over the newline-joined token list.
    std::uint64_t content_hash() const;

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };
    struct StringEq {
        using is_transparent = void;
        bool operator()(std::string_view a, std::string_view b) const {
            return a == b;
        }
    };

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId, StringHash, StringEq> ids_;
    SpecialIds specials_;
    std::vector<TokenId> sorted_special_ids_;
};

}  // namespace bioprep
