#include "bioprep/scan.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "bioprep/rng.hpp"

namespace bioprep {

namespace {

constexpr std::uint64_t kStreamCount = 0x636f756e74ULL;    // "count"
constexpr std::uint64_t kStreamShard = 0x7368617264ULL;    // "shard"
constexpr std::uint64_t kStreamMerge = 0x6d65726765ULL;    // "merge"

struct QualifyingSentence {
    std::vector<TokenId> ids;
    std::vector<int> positions;
    std::int32_t shard = 0;
    std::int64_t offset = 0;
};

struct TokenReservoir {
    std::vector<QualifyingSentence> items;
    std::uint64_t seen = 0;
};

// Algorithm R.
void offer(TokenReservoir& r, QualifyingSentence item, std::size_t capacity,
           Rng& rng) {
    ++r.seen;
    if (r.items.size() < capacity) {
        r.items.push_back(std::move(item));
        return;
    }
    const std::uint64_t j = rng.uniform_u64(r.seen);
    if (j < capacity) r.items[j] = std::move(item);
}

// Uniform m'-subset of the union of two uniformly sampled streams: a
// hypergeometric split decides how many survivors come from each side,
// then each side contributes a uniform subset of its reservoir.
TokenReservoir merge(TokenReservoir a, TokenReservoir b, std::size_t capacity,
                     Rng& rng) {
    if (a.seen == 0) return b;
    if (b.seen == 0) return a;
    TokenReservoir out;
    out.seen = a.seen + b.seen;
    if (a.items.size() + b.items.size() <= capacity && a.seen == a.items.size() &&
        b.seen == b.items.size()) {
        out.items = std::move(a.items);
        std::move(b.items.begin(), b.items.end(),
                  std::back_inserter(out.items));
        return out;
    }
    const std::uint64_t take =
        std::min<std::uint64_t>(capacity, out.seen);
    std::uint64_t from_a = 0;
    std::uint64_t remaining_a = a.seen;
    std::uint64_t remaining = out.seen;
    for (std::uint64_t s = 0; s < take; ++s) {
        const double p =
            static_cast<double>(remaining_a) / static_cast<double>(remaining);
        if (rng.uniform_real() < p) {
            ++from_a;
            --remaining_a;
        }
        --remaining;
    }
    auto pick = [&](std::vector<QualifyingSentence>& items, std::uint64_t k) {
        std::vector<std::uint32_t> idx(items.size());
        for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
        rng.partial_shuffle(idx, k);
        for (std::uint64_t i = 0; i < k; ++i)
            out.items.push_back(std::move(items[idx[i]]));
    };
    pick(a.items, from_a);
    pick(b.items, take - from_a);
    return out;
}

}  // namespace

int sample_context_count(std::string_view token, std::uint64_t seed,
                         int upper) {
    if (upper < 1)
        throw std::invalid_argument("sample_context_count: upper must be >= 1");
    const std::uint64_t x = mix_seed(seed, fnv1a(token), kStreamCount);
    return 1 + static_cast<int>(
                   (static_cast<__uint128_t>(x) * static_cast<unsigned>(upper)) >>
                   64);
}

ScanResult scan_for_tokens(const CorpusSource& corpus,
                           const std::vector<std::string>& targets,
                           const Vocab& vocab, const ScanOptions& options) {
    if (options.cap < 1)
        throw std::invalid_argument("scan: cap must be >= 1");

    std::unordered_map<TokenId, std::size_t> target_index;
    std::vector<std::string> missing;
    std::vector<TokenId> target_ids(targets.size());
    std::vector<std::size_t> capacities(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        auto id = vocab.id_of(targets[t]);
        if (!id) {
            missing.push_back(targets[t]);
            continue;
        }
        target_ids[t] = *id;
        target_index[*id] = t;
        capacities[t] = static_cast<std::size_t>(
            sample_context_count(targets[t], options.seed, options.cap));
    }
    if (!missing.empty()) {
        std::string msg = "scan: targets not in vocabulary:";
        for (const auto& m : missing) msg += " '" + m + "'";
        throw std::invalid_argument(msg);
    }

    using ShardReservoirs = std::vector<TokenReservoir>;
    auto shard_results = map_shards<ShardReservoirs>(
        corpus, options.workers, [&](std::size_t shard) {
            ShardReservoirs reservoirs(targets.size());
            std::vector<Rng> rngs;
            rngs.reserve(targets.size());
            for (std::size_t t = 0; t < targets.size(); ++t)
                rngs.emplace_back(mix_seed(options.seed, fnv1a(targets[t]),
                                           kStreamShard, shard));
            std::unordered_map<std::string, std::vector<TokenId>> memo;
            std::unordered_set<std::uint64_t> seen_sentences;
            std::vector<int> positions;
            corpus.for_each_document(shard, [&](std::string_view doc,
                                                std::int64_t offset) {
                for (const auto& sentence :
                     segment_sentences(doc, options.segmenter)) {
                    if (options.dedup_sentences &&
                        !seen_sentences.insert(fnv1a(sentence)).second)
                        continue;
                    std::vector<TokenId> ids;
                    for (const auto& word :
                         pre_tokenize(sentence, options.tokenizer)) {
                        auto it = memo.find(word);
                        if (it == memo.end())
                            it = memo.emplace(word,
                                              encode_word(word, vocab, false,
                                                          options.tokenizer))
                                     .first;
                        ids.insert(ids.end(), it->second.begin(),
                                   it->second.end());
                    }
                    for (std::size_t t = 0; t < targets.size(); ++t) {
                        positions.clear();
                        for (int p = 0; p < static_cast<int>(ids.size()); ++p)
                            if (ids[p] == target_ids[t]) positions.push_back(p);
                        if (positions.empty()) continue;
                        QualifyingSentence q;
                        q.ids = ids;
                        q.positions = positions;
                        q.shard = static_cast<std::int32_t>(shard);
                        q.offset = offset;
                        offer(reservoirs[t], std::move(q), capacities[t],
                              rngs[t]);
                    }
                }
            });
            return reservoirs;
        });

    ScanResult result;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        Rng merge_rng(mix_seed(options.seed, fnv1a(targets[t]), kStreamMerge));
        TokenReservoir merged;
        for (auto& shard_res : shard_results)
            merged = merge(std::move(merged), std::move(shard_res[t]),
                           capacities[t], merge_rng);
        std::vector<SentenceHit> hits;
        for (auto& item : merged.items) {
            for (int pos : item.positions) {
                SentenceHit hit;
                hit.sentence = item.ids;
                hit.span_start = pos;
                hit.span_end = pos + 1;
                hit.shard = corpus.shard_name(item.shard);
                hit.offset = item.offset;
                hits.push_back(std::move(hit));
            }
        }
        std::sort(hits.begin(), hits.end(),
                  [](const SentenceHit& a, const SentenceHit& b) {
                      if (a.shard != b.shard) return a.shard < b.shard;
                      if (a.offset != b.offset) return a.offset < b.offset;
                      return a.span_start < b.span_start;
                  });
        result[targets[t]] = std::move(hits);
    }
    return result;
}

void write_hits_jsonl(const ScanResult& hits,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("scan: cannot write " + path.string());
    for (const auto& [token, list] : hits) {
        for (const auto& hit : list) {
            nlohmann::json rec;
            rec["token"] = token;
            rec["sentence_token_ids"] = hit.sentence;
            rec["span"] = {hit.span_start, hit.span_end};
            rec["shard"] = hit.shard;
            rec["offset"] = hit.offset;
            out << rec.dump() << '\n';
        }
    }
    if (!out) throw std::runtime_error("scan: write failed " + path.string());
}

ScanResult read_hits_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scan: cannot open " + path.string());
    ScanResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("scan: bad JSONL at " + path.string() +
                                     ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
        SentenceHit hit;
        hit.sentence = rec.at("sentence_token_ids").get<std::vector<TokenId>>();
        const auto& span = rec.at("span");
        hit.span_start = span.at(0).get<int>();
        hit.span_end = span.at(1).get<int>();
        hit.shard = rec.at("shard").get<std::string>();
        hit.offset = rec.at("offset").get<std::int64_t>();
        result[rec.at("token").get<std::string>()].push_back(std::move(hit));
    }
    return result;
}

}  // namespace bioprep
