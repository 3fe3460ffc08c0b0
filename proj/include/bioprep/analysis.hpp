#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bioprep/corpus.hpp"
#include "bioprep/embedding.hpp"
#include "bioprep/vocab.hpp"

namespace bioprep {

// Three ascending boundaries define four raw-count categories:
// [1, b0), [b0, b1), [b1, b2), [b2, inf).
struct FrequencyBoundaries {
    std::array<std::uint64_t, 3> values = {10, 100, 1000};
};

struct FrequencyHistogram {
    FrequencyBoundaries boundaries;
    std::array<std::uint64_t, 4> counts = {0, 0, 0, 0};  // distinct words
};

int frequency_category(std::uint64_t count, const FrequencyBoundaries& b);

FrequencyHistogram bucket_frequencies(const FrequencyTable& table,
                                      const FrequencyBoundaries& boundaries);

struct CorpusComparison {
    FrequencyHistogram a;
    FrequencyHistogram b;
    // counts(a) / counts(b) per category; NaN where b is empty.
    std::array<double, 4> ratio = {0, 0, 0, 0};
    bool zero_overlap = false;  // the word sets do not intersect
};

CorpusComparison compare_corpora(const FrequencyTable& a,
                                 const FrequencyTable& b,
                                 const FrequencyBoundaries& boundaries);

struct AnisotropyOptions {
    std::uint64_t seed = 0;
    // Number of sampled unordered distinct pairs; when it reaches the
    // all-pairs count the exact all-pairs mean is computed instead.
    std::uint64_t pairs = 100000;
};

// Mean cosine similarity over vector pairs; needs >= 2 vectors, all
// nonzero (a zero vector is an error naming its index).
double anisotropy(const std::vector<std::vector<float>>& vectors,
                  const AnisotropyOptions& opts);
double anisotropy_rows(const EmbeddingMatrix& matrix,
                       const AnisotropyOptions& opts);

// TSV: token, frequency, category, then the d vector components. Tokens
// missing from the table get frequency 0 and the lowest category. Exported
// rows are the input-embedding rows; whether the original figure showed
// these or contextual vectors is not recorded, so this is the documented
// choice.
void export_freq_stratified(const EmbeddingMatrix& matrix,
                            const FrequencyTable& table, const Vocab& vocab,
                            const FrequencyBoundaries& boundaries,
                            const std::filesystem::path& path);

void write_histogram_tsv(const FrequencyHistogram& h,
                         const std::filesystem::path& path);
void write_comparison_tsv(const CorpusComparison& c,
                          const std::filesystem::path& path);
void write_comparison_json(const CorpusComparison& c,
                           const std::filesystem::path& path);

}  // namespace bioprep
