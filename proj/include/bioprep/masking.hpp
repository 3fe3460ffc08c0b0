#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bioprep/rng.hpp"
#include "bioprep/wordpiece.hpp"

namespace bioprep {

enum class MaskingStrategy { Token, WholeWord };
enum class CorruptionStrategy { EightyTenTen, MaskOnly };

struct MaskingConfig {
    MaskingStrategy strategy = MaskingStrategy::Token;
    double rate = 0.15;
    CorruptionStrategy corruption = CorruptionStrategy::EightyTenTen;
};

std::string to_string(MaskingStrategy s);
std::string to_string(CorruptionStrategy s);
MaskingStrategy masking_strategy_from_string(std::string_view s);
CorruptionStrategy corruption_strategy_from_string(std::string_view s);

struct MlmExample {
    std::vector<TokenId> original;
    std::vector<TokenId> corrupted;           // same length
    std::vector<int> selected;                // ascending positions
    std::vector<TokenId> labels;              // aligned with selected
    bool no_eligible_warning = false;
};

struct SelectedPositions {
    std::vector<int> positions;  // ascending
    bool no_eligible_warning = false;
};

// Token mode picks round(rate * eligible) positions (at least one when
// rate > 0 and anything is eligible) uniformly without replacement.
// Whole-word mode draws word groups uniformly without replacement until the
// selected subtoken count first reaches that target, so the last group may
// overshoot. Eligible positions are exactly those covered by `groups`.
SelectedPositions select_positions(const std::vector<TokenId>& ids,
                                   const WordGroup& groups,
                                   const MaskingConfig& config, Rng& rng);

// 80-10-10: each selected position becomes [MASK] with probability 0.8, a
// uniformly random non-special id (possibly the original) with 0.1, and is
// left unchanged with 0.1. MASK_ONLY always writes [MASK]. Labels carry the
// original id at every selected position.
MlmExample apply_corruption(const std::vector<TokenId>& ids,
                            const SelectedPositions& selected,
                            const MaskingConfig& config, const Vocab& vocab,
                            Rng& rng);

// select_positions then apply_corruption with one generator seeded from
// `seed`; (ids, config, seed) fully determine the result.
MlmExample build_example(const std::vector<TokenId>& ids, const Vocab& vocab,
                         const MaskingConfig& config, std::uint64_t seed);

void write_examples_jsonl(const std::vector<MlmExample>& examples,
                          const std::filesystem::path& path);

// Length-prefixed binary records for bulk consumption; see README for the
// exact layout.
void write_examples_packed(const std::vector<MlmExample>& examples,
                           const std::filesystem::path& path);
std::vector<MlmExample> read_examples_packed(
    const std::filesystem::path& path);

}  // namespace bioprep
