#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bioprep/scan.hpp"
#include "bioprep/vocab.hpp"
#include "bioprep/wordpiece.hpp"

namespace bioprep {

struct TokenSpan {
    int start = 0;
    int end = 0;
};

// Access to the base model's token vectors without embedding the model:
// static_vector is the input-embedding row, contextual_vectors the
// last-layer hidden states of a span inside a base-tokenized sentence.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual int dimension() const = 0;
    virtual std::vector<float> static_vector(TokenId base_id) const = 0;
    virtual std::vector<std::vector<float>> contextual_vectors(
        const std::vector<TokenId>& base_ids, TokenSpan span) const = 0;
    // Builders serialize calls to providers that are not reentrant.
    virtual bool reentrant() const { return true; }
};

struct TokenMapping {
    std::vector<std::pair<TokenId, TokenId>> shared;  // (domain id, base id)
    std::vector<TokenId> new_ids;                     // domain ids
    double coverage_ratio = 0.0;
};

// Exact string-match intersection; `shared` and `new_ids` partition the
// domain vocabulary, in domain id order. Specials are always shared.
TokenMapping diff_vocab(const Vocab& domain, const Vocab& base);

enum class Provenance : std::uint8_t {
    Copied = 0,
    Distilled = 1,
    Contextualized = 2,
    Random = 3,
};

enum class InitMode { Scratch, Continued, Averaged, Contextualized };

std::string to_string(InitMode m);
InitMode init_mode_from_string(std::string_view s);

class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::size_t rows, int dim)
        : dim_(dim),
          data_(rows * static_cast<std::size_t>(dim), 0.0f),
          provenance_(rows, Provenance::Random) {}

    int dim() const { return dim_; }
    std::size_t rows() const { return provenance_.size(); }
    std::span<float> row(std::size_t i) {
        return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const float> row(std::size_t i) const {
        return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    Provenance provenance(std::size_t i) const { return provenance_.at(i); }
    void set_provenance(std::size_t i, Provenance p) { provenance_[i] = p; }

    bool operator==(const EmbeddingMatrix& other) const = default;

private:
    int dim_ = 0;
    std::vector<float> data_;
    std::vector<Provenance> provenance_;
};

// Mean of the base static vectors of the token's base-tokenization pieces,
// accumulated in double with a fixed left-to-right pairwise order. A "##"
// token is matched as a mid-word fragment. Throws when the base
// tokenization degenerates to [UNK].
std::vector<double> distill(const std::string& token, const Vocab& base,
                            const EmbeddingProvider& provider,
                            const TokenizerOptions& opts = {});

struct BaseContext {
    std::vector<TokenId> ids;
    TokenSpan span;
};

// Re-renders a domain-tokenized hit for the base model: words are rebuilt
// from the domain pieces, base-tokenized, and the target occurrence is
// located by its character extent inside its word. Returns nullopt when the
// target word cannot be represented without [UNK].
std::optional<BaseContext> to_base_context(const SentenceHit& hit,
                                           const Vocab& domain,
                                           const Vocab& base,
                                           const TokenizerOptions& opts = {});

struct ContextualizeOptions {
    // Aggregate the distilled vector together with the per-sentence
    // representations (the literal reading of the aggregation set); when
    // false only the per-sentence representations are averaged, except that
    // zero usable hits always fall back to the distilled vector.
    bool include_distilled = true;
};

// Per usable hit: the mean of the provider's last-layer vectors over the
// occurrence's base-token span; the result is the mean over the aggregation
// set described above. Zero hits return distill(token) exactly.
std::vector<double> contextualize(const std::string& token,
                                  const std::vector<SentenceHit>& hits,
                                  const Vocab& domain, const Vocab& base,
                                  const EmbeddingProvider& provider,
                                  const ContextualizeOptions& copts = {},
                                  const TokenizerOptions& topts = {});

struct BuildInputs {
    const Vocab* domain = nullptr;    // all modes except continued
    const Vocab* base = nullptr;      // continued/averaged/contextualized
    const TokenMapping* mapping = nullptr;  // averaged/contextualized
    const EmbeddingProvider* provider = nullptr;  // all but scratch
    const ScanResult* hits = nullptr;             // contextualized
    int scratch_dim = 0;                          // scratch
};

struct BuildOptions {
    std::uint64_t seed = 0;
    int workers = 1;
    ContextualizeOptions contextualize;
    TokenizerOptions tokenizer;
    // Warn when more than this fraction of the vocabulary fell back to the
    // distilled vector in contextualized mode.
    double fallback_warn_ratio = 0.1;
    double scratch_stddev = 0.02;
};

struct EmbeddingBuild {
    EmbeddingMatrix matrix;
    std::vector<std::string> warnings;
};

// scratch: every row N(0, scratch_stddev^2), provenance random.
// continued: |base| rows, bit-identical copies of the provider vectors.
// averaged: shared rows copied, new rows distilled (random fallback when a
//           new token cannot be distilled).
// contextualized: shared rows copied, new rows contextualized; a token
//           whose key is missing from `hits` is an error, an empty hit
//           list is a distilled fallback.
EmbeddingBuild build_embedding_matrix(InitMode mode, const BuildInputs& in,
                                      const BuildOptions& opts);

struct MatrixManifest {
    std::string vocab_hash;  // hex
    std::string mode;
    std::uint64_t seed = 0;
};

// Binary matrix file plus a `<path>.manifest.json` sidecar;
// import(export(m)) == m including provenance.
void export_matrix(const EmbeddingMatrix& matrix,
                   const std::filesystem::path& path,
                   const MatrixManifest& manifest);
EmbeddingMatrix import_matrix(const std::filesystem::path& path);
MatrixManifest read_matrix_manifest(const std::filesystem::path& path);

// --- provider exchange protocol ------------------------------------------
// For encoders that run elsewhere: requests out as JSONL, span vectors back
// as one binary file in request order.

struct ContextRequest {
    std::vector<TokenId> base_ids;
    TokenSpan span;
};

struct RequestBundle {
    std::vector<ContextRequest> requests;
    // token -> request indices, aligned with that token's usable hits.
    std::map<std::string, std::vector<int>> by_token;
};

RequestBundle make_context_requests(const ScanResult& hits,
                                    const Vocab& domain, const Vocab& base,
                                    const TokenizerOptions& opts = {});
void write_context_requests(const RequestBundle& bundle,
                            const std::filesystem::path& path);
RequestBundle read_context_requests(const std::filesystem::path& path);

// The consumer's side: one vector per span position of every request,
// concatenated in request order.
void write_vector_responses(const std::vector<std::vector<float>>& vectors,
                            const std::filesystem::path& path);
// Validates the header and, when expected >= 0, the vector count.
std::vector<std::vector<float>> read_vector_responses(
    const std::filesystem::path& path, std::int64_t expected_count = -1);

// Context-free provider over a static matrix: contextual vectors are just
// the static rows. Stands in for a real encoder in single-process runs.
class MatrixProvider : public EmbeddingProvider {
public:
    explicit MatrixProvider(EmbeddingMatrix rows) : rows_(std::move(rows)) {}
    int dimension() const override { return rows_.dim(); }
    std::vector<float> static_vector(TokenId base_id) const override;
    std::vector<std::vector<float>> contextual_vectors(
        const std::vector<TokenId>& base_ids, TokenSpan span) const override;

private:
    EmbeddingMatrix rows_;
};

// Provider backed by precomputed responses for a fixed request bundle;
// contextual_vectors only answers requests present in the bundle.
class PrecomputedProvider : public EmbeddingProvider {
public:
    PrecomputedProvider(EmbeddingMatrix static_rows, RequestBundle bundle,
                        std::vector<std::vector<float>> responses);
    int dimension() const override { return static_rows_.dim(); }
    std::vector<float> static_vector(TokenId base_id) const override;
    std::vector<std::vector<float>> contextual_vectors(
        const std::vector<TokenId>& base_ids, TokenSpan span) const override;

private:
    EmbeddingMatrix static_rows_;
    RequestBundle bundle_;
    std::vector<std::vector<float>> responses_;
    // request key -> (first response vector index, request index)
    std::map<std::string, std::pair<std::size_t, std::size_t>> lookup_;
};

}  // namespace bioprep
