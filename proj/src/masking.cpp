#include "bioprep/masking.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bioprep {

std::string to_string(MaskingStrategy s) {
    return s == MaskingStrategy::Token ? "token" : "whole_word";
}

std::string to_string(CorruptionStrategy s) {
    return s == CorruptionStrategy::EightyTenTen ? "80-10-10" : "mask_only";
}

MaskingStrategy masking_strategy_from_string(std::string_view s) {
    if (s == "token" || s == "tokens") return MaskingStrategy::Token;
    if (s == "whole_word" || s == "wwm") return MaskingStrategy::WholeWord;
    throw std::invalid_argument("unknown masking strategy: " + std::string(s));
}

CorruptionStrategy corruption_strategy_from_string(std::string_view s) {
    if (s == "80-10-10" || s == "with_corruption")
        return CorruptionStrategy::EightyTenTen;
    if (s == "mask_only" || s == "no_corruption")
        return CorruptionStrategy::MaskOnly;
    throw std::invalid_argument("unknown corruption strategy: " +
                                std::string(s));
}

namespace {

// round-half-away-from-zero, minimum 1 whenever anything is eligible.
std::size_t selection_target(double rate, std::size_t eligible) {
    if (rate <= 0.0 || eligible == 0) return 0;
    auto n = static_cast<std::size_t>(std::llround(rate * static_cast<double>(eligible)));
    return std::max<std::size_t>(n, 1);
}

}  // namespace

SelectedPositions select_positions(const std::vector<TokenId>& ids,
                                   const WordGroup& groups,
                                   const MaskingConfig& config, Rng& rng) {
    if (ids.empty())
        throw std::invalid_argument("select_positions: empty sequence");
    if (config.rate < 0.0 || config.rate > 1.0)
        throw std::invalid_argument("select_positions: rate outside [0,1]");

    std::size_t eligible = 0;
    for (const auto& [s, e] : groups.ranges) eligible += e - s;

    SelectedPositions out;
    if (config.rate > 0.0 && eligible == 0) {
        out.no_eligible_warning = true;
        return out;
    }
    const std::size_t target = selection_target(config.rate, eligible);
    if (target == 0) return out;

    if (config.strategy == MaskingStrategy::Token) {
        std::vector<int> positions;
        positions.reserve(eligible);
        for (const auto& [s, e] : groups.ranges)
            for (int p = s; p < e; ++p) positions.push_back(p);
        rng.partial_shuffle(positions, target);
        positions.resize(target);
        out.positions = std::move(positions);
    } else {
        std::vector<std::uint32_t> order(groups.ranges.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.partial_shuffle(order, order.size());
        std::size_t covered = 0;
        for (std::uint32_t gi : order) {
            const auto& [s, e] = groups.ranges[gi];
            for (int p = s; p < e; ++p) out.positions.push_back(p);
            covered += e - s;
            if (covered >= target) break;
        }
    }
    std::sort(out.positions.begin(), out.positions.end());
    return out;
}

MlmExample apply_corruption(const std::vector<TokenId>& ids,
                            const SelectedPositions& selected,
                            const MaskingConfig& config, const Vocab& vocab,
                            Rng& rng) {
    MlmExample ex;
    ex.original = ids;
    ex.corrupted = ids;
    ex.selected = selected.positions;
    ex.no_eligible_warning = selected.no_eligible_warning;
    ex.labels.reserve(ex.selected.size());
    const TokenId mask_id = vocab.specials().mask;
    for (int p : ex.selected) {
        ex.labels.push_back(ids[p]);
        if (config.corruption == CorruptionStrategy::MaskOnly) {
            ex.corrupted[p] = mask_id;
            continue;
        }
        const std::uint64_t r = rng.uniform_u64(10);
        if (r < 8) {
            ex.corrupted[p] = mask_id;
        } else if (r == 8) {
            ex.corrupted[p] =
                vocab.non_special_at(rng.uniform_u64(vocab.non_special_count()));
        }
        // r == 9: unchanged.
    }
    return ex;
}

MlmExample build_example(const std::vector<TokenId>& ids, const Vocab& vocab,
                         const MaskingConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    const WordGroup groups = word_groups(ids, vocab);
    const SelectedPositions sel = select_positions(ids, groups, config, rng);
    return apply_corruption(ids, sel, config, vocab, rng);
}

void write_examples_jsonl(const std::vector<MlmExample>& examples,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("masking: cannot write " + path.string());
    for (const auto& ex : examples) {
        nlohmann::json rec;
        rec["original"] = ex.original;
        rec["corrupted"] = ex.corrupted;
        nlohmann::json labels = nlohmann::json::object();
        for (std::size_t i = 0; i < ex.selected.size(); ++i)
            labels[std::to_string(ex.selected[i])] = ex.labels[i];
        rec["labels"] = std::move(labels);
        rec["selected"] = ex.selected;
        out << rec.dump() << '\n';
    }
    if (!out)
        throw std::runtime_error("masking: write failed " + path.string());
}

namespace {

constexpr char kPackedMagic[4] = {'B', 'P', 'P', 'K'};
constexpr std::uint32_t kPackedVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in)
        throw std::runtime_error("masking: truncated packed file " +
                                 path.string());
    return v;
}

}  // namespace

void write_examples_packed(const std::vector<MlmExample>& examples,
                           const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("masking: cannot write " + path.string());
    out.write(kPackedMagic, 4);
    put(out, kPackedVersion);
    put(out, static_cast<std::uint32_t>(examples.size()));
    for (const auto& ex : examples) {
        put(out, static_cast<std::uint32_t>(ex.original.size()));
        for (TokenId id : ex.original) put(out, static_cast<std::uint32_t>(id));
        for (TokenId id : ex.corrupted)
            put(out, static_cast<std::uint32_t>(id));
        put(out, static_cast<std::uint32_t>(ex.selected.size()));
        for (std::size_t i = 0; i < ex.selected.size(); ++i) {
            put(out, static_cast<std::uint32_t>(ex.selected[i]));
            put(out, static_cast<std::uint32_t>(ex.labels[i]));
        }
    }
    if (!out)
        throw std::runtime_error("masking: write failed " + path.string());
}

std::vector<MlmExample> read_examples_packed(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("masking: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kPackedMagic, 4) != 0)
        throw std::runtime_error("masking: bad packed header in " +
                                 path.string());
    if (get<std::uint32_t>(in, path) != kPackedVersion)
        throw std::runtime_error("masking: unsupported packed version in " +
                                 path.string());
    const auto count = get<std::uint32_t>(in, path);
    std::vector<MlmExample> examples(count);
    for (auto& ex : examples) {
        const auto len = get<std::uint32_t>(in, path);
        ex.original.resize(len);
        for (auto& id : ex.original)
            id = static_cast<TokenId>(get<std::uint32_t>(in, path));
        ex.corrupted.resize(len);
        for (auto& id : ex.corrupted)
            id = static_cast<TokenId>(get<std::uint32_t>(in, path));
        const auto nsel = get<std::uint32_t>(in, path);
        ex.selected.resize(nsel);
        ex.labels.resize(nsel);
        for (std::uint32_t i = 0; i < nsel; ++i) {
            ex.selected[i] = static_cast<int>(get<std::uint32_t>(in, path));
            ex.labels[i] = static_cast<TokenId>(get<std::uint32_t>(in, path));
        }
    }
    return examples;
}

}  // namespace bioprep
