#include "bioprep/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bioprep/corpus.hpp"
#include "bioprep/kernels.hpp"
#include "bioprep/rng.hpp"
#include "bioprep/unicode.hpp"

namespace bioprep {

TokenMapping diff_vocab(const Vocab& domain, const Vocab& base) {
    TokenMapping mapping;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        const auto id = static_cast<TokenId>(i);
        if (auto base_id = base.id_of(domain.token(id)))
            mapping.shared.emplace_back(id, *base_id);
        else
            mapping.new_ids.push_back(id);
    }
    mapping.coverage_ratio = static_cast<double>(mapping.shared.size()) /
                             static_cast<double>(domain.size());
    return mapping;
}

std::string to_string(InitMode m) {
    switch (m) {
        case InitMode::Scratch: return "scratch";
        case InitMode::Continued: return "continued";
        case InitMode::Averaged: return "averaged";
        case InitMode::Contextualized: return "contextualized";
    }
    return "?";
}

InitMode init_mode_from_string(std::string_view s) {
    if (s == "scratch") return InitMode::Scratch;
    if (s == "continued") return InitMode::Continued;
    if (s == "averaged") return InitMode::Averaged;
    if (s == "contextualized") return InitMode::Contextualized;
    throw std::invalid_argument("unknown init mode: " + std::string(s));
}

namespace {

std::vector<TokenId> base_pieces_or_throw(const std::string& token,
                                          const Vocab& base,
                                          const TokenizerOptions& opts) {
    const bool continuation = Vocab::is_continuation(token);
    const std::string_view fragment =
        continuation ? std::string_view(token).substr(2)
                     : std::string_view(token);
    auto pieces = encode_word(fragment, base, continuation, opts);
    if (pieces.empty())
        throw std::invalid_argument("distill: empty token");
    for (TokenId id : pieces)
        if (id == base.specials().unk)
            throw std::runtime_error(
                "distill: base tokenization of '" + token +
                "' contains [UNK]");
    return pieces;
}

void check_dimension(const std::vector<float>& v, int dim,
                     const char* what) {
    if (static_cast<int>(v.size()) != dim)
        throw std::runtime_error(std::string(what) +
                                 ": provider returned wrong dimension");
}

}  // namespace

std::vector<double> distill(const std::string& token, const Vocab& base,
                            const EmbeddingProvider& provider,
                            const TokenizerOptions& opts) {
    const auto pieces = base_pieces_or_throw(token, base, opts);
    std::vector<std::vector<float>> vecs;
    vecs.reserve(pieces.size());
    for (TokenId id : pieces) {
        vecs.push_back(provider.static_vector(id));
        check_dimension(vecs.back(), provider.dimension(), "distill");
    }
    std::vector<std::span<const float>> views(vecs.begin(), vecs.end());
    return kernels::pairwise_mean(views);
}

std::optional<BaseContext> to_base_context(const SentenceHit& hit,
                                           const Vocab& domain,
                                           const Vocab& base,
                                           const TokenizerOptions& opts) {
    if (hit.span_start < 0 || hit.span_end <= hit.span_start ||
        hit.span_end > static_cast<int>(hit.sentence.size()))
        throw std::invalid_argument("to_base_context: span out of range");

    // Rebuild surface words from the domain pieces; specials never carry
    // surface text and act as word boundaries.
    struct Word {
        std::string text;
        int first_tok;
        int last_tok;  // inclusive
    };
    std::vector<Word> words;
    for (int i = 0; i < static_cast<int>(hit.sentence.size()); ++i) {
        const TokenId id = hit.sentence[i];
        if (domain.is_special(id)) continue;
        const std::string& tok = domain.token(id);
        if (Vocab::is_continuation(tok) && !words.empty() &&
            words.back().last_tok == i - 1) {
            words.back().text.append(tok, 2, std::string::npos);
            words.back().last_tok = i;
        } else {
            const bool cont = Vocab::is_continuation(tok);
            words.push_back(
                {cont ? tok.substr(2) : tok, i, i});
        }
    }

    const Word* target_word = nullptr;
    for (const auto& w : words)
        if (hit.span_start >= w.first_tok && hit.span_start <= w.last_tok) {
            target_word = &w;
            break;
        }
    if (!target_word) return std::nullopt;

    // Character extent of the target piece inside its word.
    std::size_t char_begin = 0;
    for (int i = target_word->first_tok; i < hit.span_start; ++i) {
        const std::string& tok = domain.token(hit.sentence[i]);
        const std::string_view surface =
            Vocab::is_continuation(tok)
                ? std::string_view(tok).substr(2)
                : std::string_view(tok);
        char_begin += uni::decode_all(surface).size();
    }
    std::size_t char_end = char_begin;
    for (int i = hit.span_start; i < hit.span_end; ++i) {
        const std::string& tok = domain.token(hit.sentence[i]);
        const std::string_view surface =
            Vocab::is_continuation(tok)
                ? std::string_view(tok).substr(2)
                : std::string_view(tok);
        char_end += uni::decode_all(surface).size();
    }

    BaseContext ctx;
    TokenSpan span{-1, -1};
    for (const auto& w : words) {
        auto pieces = encode_word(w.text, base, false, opts);
        if (&w == target_word) {
            for (TokenId id : pieces)
                if (id == base.specials().unk) return std::nullopt;
            // Map the char extent onto base piece extents.
            std::size_t cursor = 0;
            for (std::size_t k = 0; k < pieces.size(); ++k) {
                const std::string& tok = base.token(pieces[k]);
                const std::string_view surface =
                    Vocab::is_continuation(tok)
                        ? std::string_view(tok).substr(2)
                        : std::string_view(tok);
                const std::size_t len = uni::decode_all(surface).size();
                const std::size_t piece_begin = cursor;
                const std::size_t piece_end = cursor + len;
                if (piece_begin < char_end && piece_end > char_begin) {
                    if (span.start < 0)
                        span.start = static_cast<int>(ctx.ids.size() + k);
                    span.end = static_cast<int>(ctx.ids.size() + k + 1);
                }
                cursor = piece_end;
            }
        }
        ctx.ids.insert(ctx.ids.end(), pieces.begin(), pieces.end());
    }
    if (span.start < 0) return std::nullopt;
    ctx.span = span;
    return ctx;
}

std::vector<double> contextualize(const std::string& token,
                                  const std::vector<SentenceHit>& hits,
                                  const Vocab& domain, const Vocab& base,
                                  const EmbeddingProvider& provider,
                                  const ContextualizeOptions& copts,
                                  const TokenizerOptions& topts) {
    std::vector<std::vector<double>> reps;
    reps.reserve(hits.size() + 1);
    for (const auto& hit : hits) {
        auto ctx = to_base_context(hit, domain, base, topts);
        if (!ctx) continue;
        auto vecs = provider.contextual_vectors(ctx->ids, ctx->span);
        if (vecs.size() !=
            static_cast<std::size_t>(ctx->span.end - ctx->span.start))
            throw std::runtime_error(
                "contextualize: provider returned wrong span size for '" +
                token + "'");
        for (const auto& v : vecs)
            check_dimension(v, provider.dimension(), "contextualize");
        std::vector<std::span<const float>> views(vecs.begin(), vecs.end());
        reps.push_back(kernels::pairwise_mean(views));
    }
    if (copts.include_distilled || reps.empty()) {
        reps.insert(reps.begin(), distill(token, base, provider, topts));
    }
    std::vector<std::span<const double>> views(reps.begin(), reps.end());
    return kernels::pairwise_mean_d(views);
}

namespace {

void fill_random_row(std::span<float> row, std::uint64_t seed,
                     std::size_t index, double stddev) {
    Rng rng(mix_seed(seed, 0x726f77ULL /* "row" */, index));
    for (float& x : row)
        x = static_cast<float>(rng.gaussian() * stddev);
}

void assert_finite_row(std::span<const float> row, std::size_t index) {
    for (float x : row)
        if (!std::isfinite(x))
            throw std::runtime_error("embedding matrix row " +
                                     std::to_string(index) +
                                     " is not finite");
}

void copy_into(std::span<float> dst, const std::vector<float>& src) {
    std::copy(src.begin(), src.end(), dst.begin());
}

void cast_into(std::span<float> dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = static_cast<float>(src[i]);
}

}  // namespace

EmbeddingBuild build_embedding_matrix(InitMode mode, const BuildInputs& in,
                                      const BuildOptions& opts) {
    EmbeddingBuild result;
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument(
                std::string("build_embedding_matrix: missing input: ") + what);
    };

    if (mode == InitMode::Scratch) {
        require(in.domain != nullptr, "domain vocab");
        require(in.scratch_dim > 0, "scratch_dim");
        EmbeddingMatrix m(in.domain->size(), in.scratch_dim);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            fill_random_row(m.row(i), opts.seed, i, opts.scratch_stddev);
            m.set_provenance(i, Provenance::Random);
        }
        result.matrix = std::move(m);
        return result;
    }

    require(in.provider != nullptr, "provider");
    const int dim = in.provider->dimension();

    if (mode == InitMode::Continued) {
        require(in.base != nullptr, "base vocab");
        EmbeddingMatrix m(in.base->size(), dim);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            auto v = in.provider->static_vector(static_cast<TokenId>(i));
            check_dimension(v, dim, "build");
            copy_into(m.row(i), v);
            m.set_provenance(i, Provenance::Copied);
            assert_finite_row(m.row(i), i);
        }
        result.matrix = std::move(m);
        return result;
    }

    require(in.domain != nullptr, "domain vocab");
    require(in.base != nullptr, "base vocab");
    require(in.mapping != nullptr, "token mapping");
    if (in.mapping->shared.size() + in.mapping->new_ids.size() !=
        in.domain->size())
        throw std::invalid_argument(
            "build_embedding_matrix: mapping does not partition the domain "
            "vocab");

    if (mode == InitMode::Contextualized) {
        require(in.hits != nullptr, "scan hits");
        std::vector<std::string> absent;
        for (TokenId id : in.mapping->new_ids)
            if (!in.hits->count(in.domain->token(id)))
                absent.push_back(in.domain->token(id));
        if (!absent.empty()) {
            std::string msg =
                "build_embedding_matrix: no scan entry for tokens:";
            for (const auto& t : absent) msg += " '" + t + "'";
            throw std::invalid_argument(msg);
        }
    }

    EmbeddingMatrix m(in.domain->size(), dim);
    for (const auto& [domain_id, base_id] : in.mapping->shared) {
        auto v = in.provider->static_vector(base_id);
        check_dimension(v, dim, "build");
        copy_into(m.row(domain_id), v);
        m.set_provenance(domain_id, Provenance::Copied);
        assert_finite_row(m.row(domain_id), domain_id);
    }

    std::size_t fallbacks = 0;
    std::mutex provider_mu;
    std::mutex state_mu;
    const bool serialize = !in.provider->reentrant();

    auto build_row = [&](TokenId domain_id) {
        const std::string& token = in.domain->token(domain_id);
        std::vector<double> row_values;
        Provenance prov;
        if (mode == InitMode::Averaged) {
            std::optional<std::unique_lock<std::mutex>> lock;
            if (serialize) lock.emplace(provider_mu);
            try {
                row_values =
                    distill(token, *in.base, *in.provider, opts.tokenizer);
                prov = Provenance::Distilled;
            } catch (const std::runtime_error&) {
                // Token not representable in the base vocabulary.
                prov = Provenance::Random;
            }
        } else {
            const auto& hits = in.hits->at(token);
            std::optional<std::unique_lock<std::mutex>> lock;
            if (serialize) lock.emplace(provider_mu);
            std::size_t usable = 0;
            for (const auto& hit : hits)
                if (to_base_context(hit, *in.domain, *in.base, opts.tokenizer))
                    ++usable;
            row_values = contextualize(token, hits, *in.domain, *in.base,
                                       *in.provider, opts.contextualize,
                                       opts.tokenizer);
            prov = usable > 0 ? Provenance::Contextualized
                              : Provenance::Distilled;
            if (usable == 0) {
                std::lock_guard<std::mutex> g(state_mu);
                ++fallbacks;
            }
        }
        if (prov == Provenance::Random) {
            fill_random_row(m.row(domain_id), opts.seed, domain_id,
                            opts.scratch_stddev);
        } else {
            cast_into(m.row(domain_id), row_values);
        }
        m.set_provenance(domain_id, prov);
        assert_finite_row(m.row(domain_id), domain_id);
    };

    detail::run_shard_pool(
        in.mapping->new_ids.size(), opts.workers,
        [&](std::size_t k) { build_row(in.mapping->new_ids[k]); });

    if (mode == InitMode::Contextualized && !in.domain->tokens().empty()) {
        const double ratio = static_cast<double>(fallbacks) /
                             static_cast<double>(in.domain->size());
        if (ratio >= opts.fallback_warn_ratio) {
            std::ostringstream w;
            w << "distilled fallback ratio " << ratio
              << " exceeds threshold " << opts.fallback_warn_ratio << " ("
              << fallbacks << " of " << in.domain->size() << " tokens)";
            result.warnings.push_back(w.str());
        }
    }
    result.matrix = std::move(m);
    return result;
}

namespace {

constexpr char kMatrixMagic[4] = {'B', 'P', 'E', 'M'};
constexpr std::uint32_t kMatrixVersion = 1;

}  // namespace

void export_matrix(const EmbeddingMatrix& matrix,
                   const std::filesystem::path& path,
                   const MatrixManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("matrix: cannot write " + path.string());
    out.write(kMatrixMagic, 4);
    const std::uint32_t version = kMatrixVersion;
    const auto rows = static_cast<std::uint32_t>(matrix.rows());
    const auto dim = static_cast<std::uint32_t>(matrix.dim());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&rows), 4);
    out.write(reinterpret_cast<const char*>(&dim), 4);
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        auto r = matrix.row(i);
        out.write(reinterpret_cast<const char*>(r.data()),
                  static_cast<std::streamsize>(r.size() * sizeof(float)));
    }
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto p = static_cast<std::uint8_t>(matrix.provenance(i));
        out.write(reinterpret_cast<const char*>(&p), 1);
    }
    if (!out)
        throw std::runtime_error("matrix: write failed " + path.string());

    nlohmann::json j;
    j["vocab_hash"] = manifest.vocab_hash;
    j["mode"] = manifest.mode;
    j["seed"] = manifest.seed;
    j["rows"] = rows;
    j["dim"] = dim;
    std::ofstream mf(path.string() + ".manifest.json", std::ios::binary);
    if (!mf)
        throw std::runtime_error("matrix: cannot write manifest for " +
                                 path.string());
    mf << j.dump(2) << '\n';
}

EmbeddingMatrix import_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("matrix: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMatrixMagic, 4) != 0)
        throw std::runtime_error("matrix: bad header in " + path.string());
    std::uint32_t version = 0, rows = 0, dim = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&rows), 4);
    in.read(reinterpret_cast<char*>(&dim), 4);
    if (!in || version != kMatrixVersion)
        throw std::runtime_error("matrix: unsupported header in " +
                                 path.string());
    EmbeddingMatrix m(rows, static_cast<int>(dim));
    for (std::uint32_t i = 0; i < rows; ++i) {
        auto r = m.row(i);
        in.read(reinterpret_cast<char*>(r.data()),
                static_cast<std::streamsize>(r.size() * sizeof(float)));
    }
    for (std::uint32_t i = 0; i < rows; ++i) {
        std::uint8_t p = 0;
        in.read(reinterpret_cast<char*>(&p), 1);
        if (p > static_cast<std::uint8_t>(Provenance::Random))
            throw std::runtime_error("matrix: bad provenance byte in " +
                                     path.string());
        m.set_provenance(i, static_cast<Provenance>(p));
    }
    if (!in)
        throw std::runtime_error("matrix: truncated file " + path.string());
    // Trailing bytes mean the header is inconsistent with the payload.
    in.peek();
    if (!in.eof())
        throw std::runtime_error("matrix: trailing bytes in " + path.string());
    return m;
}

MatrixManifest read_matrix_manifest(const std::filesystem::path& path) {
    std::ifstream in(path.string() + ".manifest.json");
    if (!in)
        throw std::runtime_error("matrix: cannot open manifest for " +
                                 path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    MatrixManifest m;
    m.vocab_hash = j.at("vocab_hash").get<std::string>();
    m.mode = j.at("mode").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    return m;
}

RequestBundle make_context_requests(const ScanResult& hits,
                                    const Vocab& domain, const Vocab& base,
                                    const TokenizerOptions& opts) {
    RequestBundle bundle;
    for (const auto& [token, list] : hits) {
        auto& indices = bundle.by_token[token];
        for (const auto& hit : list) {
            auto ctx = to_base_context(hit, domain, base, opts);
            if (!ctx) continue;
            indices.push_back(static_cast<int>(bundle.requests.size()));
            bundle.requests.push_back({std::move(ctx->ids), ctx->span});
        }
    }
    return bundle;
}

void write_context_requests(const RequestBundle& bundle,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("requests: cannot write " + path.string());
    for (std::size_t i = 0; i < bundle.requests.size(); ++i) {
        const auto& req = bundle.requests[i];
        nlohmann::json rec;
        rec["index"] = i;
        rec["base_token_ids"] = req.base_ids;
        rec["span"] = {req.span.start, req.span.end};
        out << rec.dump() << '\n';
    }
    if (!out)
        throw std::runtime_error("requests: write failed " + path.string());
}

RequestBundle read_context_requests(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("requests: cannot open " + path.string());
    RequestBundle bundle;
    std::string line;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        if (rec.at("index").get<std::size_t>() != expected)
            throw std::runtime_error("requests: out-of-order index in " +
                                     path.string());
        ContextRequest req;
        req.base_ids = rec.at("base_token_ids").get<std::vector<TokenId>>();
        const auto& span = rec.at("span");
        req.span = {span.at(0).get<int>(), span.at(1).get<int>()};
        bundle.requests.push_back(std::move(req));
        ++expected;
    }
    return bundle;
}

namespace {

constexpr char kVectorMagic[4] = {'B', 'P', 'V', 'X'};
constexpr std::uint32_t kVectorVersion = 1;

}  // namespace

void write_vector_responses(const std::vector<std::vector<float>>& vectors,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("responses: cannot write " + path.string());
    out.write(kVectorMagic, 4);
    const std::uint32_t version = kVectorVersion;
    const auto count = static_cast<std::uint32_t>(vectors.size());
    const std::uint32_t dim =
        vectors.empty() ? 0 : static_cast<std::uint32_t>(vectors[0].size());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    out.write(reinterpret_cast<const char*>(&dim), 4);
    for (const auto& v : vectors) {
        if (v.size() != dim)
            throw std::invalid_argument("responses: ragged vectors");
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(float)));
    }
    if (!out)
        throw std::runtime_error("responses: write failed " + path.string());
}

std::vector<std::vector<float>> read_vector_responses(
    const std::filesystem::path& path, std::int64_t expected_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("responses: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kVectorMagic, 4) != 0)
        throw std::runtime_error("responses: bad header in " + path.string());
    std::uint32_t version = 0, count = 0, dim = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&count), 4);
    in.read(reinterpret_cast<char*>(&dim), 4);
    if (!in || version != kVectorVersion)
        throw std::runtime_error("responses: unsupported header in " +
                                 path.string());
    if (expected_count >= 0 &&
        static_cast<std::int64_t>(count) != expected_count)
        throw std::runtime_error(
            "responses: vector count " + std::to_string(count) +
            " does not match expected " + std::to_string(expected_count));
    std::vector<std::vector<float>> vectors(count,
                                            std::vector<float>(dim, 0.0f));
    for (auto& v : vectors) {
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(float)));
        if (!in)
            throw std::runtime_error("responses: truncated file " +
                                     path.string());
    }
    return vectors;
}

std::vector<float> MatrixProvider::static_vector(TokenId base_id) const {
    auto r = rows_.row(static_cast<std::size_t>(base_id));
    return {r.begin(), r.end()};
}

std::vector<std::vector<float>> MatrixProvider::contextual_vectors(
    const std::vector<TokenId>& base_ids, TokenSpan span) const {
    std::vector<std::vector<float>> out;
    out.reserve(span.end - span.start);
    for (int p = span.start; p < span.end; ++p)
        out.push_back(static_vector(base_ids.at(p)));
    return out;
}

namespace {

std::string request_key(const std::vector<TokenId>& ids, TokenSpan span) {
    std::string key;
    key.reserve(ids.size() * 7 + 16);
    for (TokenId id : ids) {
        key += std::to_string(id);
        key.push_back(',');
    }
    key.push_back('|');
    key += std::to_string(span.start);
    key.push_back(':');
    key += std::to_string(span.end);
    return key;
}

}  // namespace

PrecomputedProvider::PrecomputedProvider(
    EmbeddingMatrix static_rows, RequestBundle bundle,
    std::vector<std::vector<float>> responses)
    : static_rows_(std::move(static_rows)),
      bundle_(std::move(bundle)),
      responses_(std::move(responses)) {
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < bundle_.requests.size(); ++i) {
        const auto& req = bundle_.requests[i];
        lookup_.emplace(request_key(req.base_ids, req.span),
                        std::make_pair(cursor, i));
        cursor += static_cast<std::size_t>(req.span.end - req.span.start);
    }
    if (cursor != responses_.size())
        throw std::runtime_error(
            "responses: expected " + std::to_string(cursor) +
            " span vectors, file has " + std::to_string(responses_.size()));
    for (const auto& v : responses_)
        if (static_cast<int>(v.size()) != static_rows_.dim())
            throw std::runtime_error(
                "responses: dimension does not match the static matrix");
}

std::vector<float> PrecomputedProvider::static_vector(TokenId base_id) const {
    auto r = static_rows_.row(static_cast<std::size_t>(base_id));
    return {r.begin(), r.end()};
}

std::vector<std::vector<float>> PrecomputedProvider::contextual_vectors(
    const std::vector<TokenId>& base_ids, TokenSpan span) const {
    auto it = lookup_.find(request_key(base_ids, span));
    if (it == lookup_.end())
        throw std::runtime_error(
            "responses: no precomputed vectors for this request");
    const std::size_t first = it->second.first;
    std::vector<std::vector<float>> out;
    out.reserve(span.end - span.start);
    for (int k = 0; k < span.end - span.start; ++k)
        out.push_back(responses_.at(first + k));
    return out;
}

}  // namespace bioprep
