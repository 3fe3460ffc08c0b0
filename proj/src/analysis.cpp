#include "bioprep/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "bioprep/kernels.hpp"
#include "bioprep/rng.hpp"

namespace bioprep {

namespace {

void check_boundaries(const FrequencyBoundaries& b) {
    if (!(b.values[0] > 0 && b.values[0] < b.values[1] &&
          b.values[1] < b.values[2]))
        throw std::invalid_argument(
            "analysis: boundaries must be strictly ascending positive");
}

}  // namespace

int frequency_category(std::uint64_t count, const FrequencyBoundaries& b) {
    if (count < b.values[0]) return 0;
    if (count < b.values[1]) return 1;
    if (count < b.values[2]) return 2;
    return 3;
}

FrequencyHistogram bucket_frequencies(const FrequencyTable& table,
                                      const FrequencyBoundaries& boundaries) {
    check_boundaries(boundaries);
    FrequencyHistogram h;
    h.boundaries = boundaries;
    for (const auto& [_, count] : table.counts)
        ++h.counts[frequency_category(count, boundaries)];
    return h;
}

CorpusComparison compare_corpora(const FrequencyTable& a,
                                 const FrequencyTable& b,
                                 const FrequencyBoundaries& boundaries) {
    CorpusComparison c;
    c.a = bucket_frequencies(a, boundaries);
    c.b = bucket_frequencies(b, boundaries);
    for (int k = 0; k < 4; ++k) {
        c.ratio[k] = c.b.counts[k] == 0
                         ? std::numeric_limits<double>::quiet_NaN()
                         : static_cast<double>(c.a.counts[k]) /
                               static_cast<double>(c.b.counts[k]);
    }
    const auto& small = a.counts.size() <= b.counts.size() ? a : b;
    const auto& large = a.counts.size() <= b.counts.size() ? b : a;
    c.zero_overlap = true;
    for (const auto& [w, _] : small.counts) {
        if (large.counts.count(w)) {
            c.zero_overlap = false;
            break;
        }
    }
    return c;
}

namespace {

std::vector<std::span<const float>> as_views(
    const std::vector<std::vector<float>>& vectors) {
    return {vectors.begin(), vectors.end()};
}

double anisotropy_views(const std::vector<std::span<const float>>& views,
                        const AnisotropyOptions& opts) {
    const std::size_t n = views.size();
    if (n < 2)
        throw std::invalid_argument("anisotropy: need at least 2 vectors");
    for (std::size_t i = 0; i < n; ++i) {
        if (kernels::squared_norm(views[i]) == 0.0)
            throw std::invalid_argument("anisotropy: zero vector at index " +
                                        std::to_string(i));
    }
    const std::uint64_t all_pairs =
        static_cast<std::uint64_t>(n) * (n - 1) / 2;
    double sum = 0.0;
    double comp = 0.0;
    auto add = [&](double x) {
        const double term = x - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    };
    if (opts.pairs >= all_pairs) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                add(kernels::cosine(views[i], views[j]));
        return sum / static_cast<double>(all_pairs);
    }
    Rng rng(mix_seed(opts.seed, 0x616e69736fULL /* "aniso" */));
    for (std::uint64_t k = 0; k < opts.pairs; ++k) {
        const auto i = static_cast<std::size_t>(rng.uniform_u64(n));
        auto j = static_cast<std::size_t>(rng.uniform_u64(n - 1));
        if (j >= i) ++j;
        add(kernels::cosine(views[i], views[j]));
    }
    return sum / static_cast<double>(opts.pairs);
}

}  // namespace

double anisotropy(const std::vector<std::vector<float>>& vectors,
                  const AnisotropyOptions& opts) {
    return anisotropy_views(as_views(vectors), opts);
}

double anisotropy_rows(const EmbeddingMatrix& matrix,
                       const AnisotropyOptions& opts) {
    std::vector<std::span<const float>> views;
    views.reserve(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i)
        views.push_back(matrix.row(i));
    return anisotropy_views(views, opts);
}

void export_freq_stratified(const EmbeddingMatrix& matrix,
                            const FrequencyTable& table, const Vocab& vocab,
                            const FrequencyBoundaries& boundaries,
                            const std::filesystem::path& path) {
    check_boundaries(boundaries);
    if (matrix.rows() != vocab.size())
        throw std::invalid_argument(
            "export_freq_stratified: matrix rows do not match the vocab");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("analysis: cannot write " + path.string());
    out << "token\tfrequency\tcategory";
    for (int d = 0; d < matrix.dim(); ++d) out << "\tv" << d;
    out << '\n';
    char buf[48];
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const std::string& token = vocab.token(static_cast<TokenId>(i));
        auto it = table.counts.find(token);
        const std::uint64_t freq = it == table.counts.end() ? 0 : it->second;
        out << token << '\t' << freq << '\t'
            << frequency_category(freq, boundaries);
        for (float x : matrix.row(i)) {
            std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(x));
            out << '\t' << buf;
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("analysis: write failed " + path.string());
}

namespace {

std::string category_label(int k, const FrequencyBoundaries& b) {
    switch (k) {
        case 0: return "[1," + std::to_string(b.values[0]) + ")";
        case 1:
            return "[" + std::to_string(b.values[0]) + "," +
                   std::to_string(b.values[1]) + ")";
        case 2:
            return "[" + std::to_string(b.values[1]) + "," +
                   std::to_string(b.values[2]) + ")";
        default: return "[" + std::to_string(b.values[2]) + ",inf)";
    }
}

}  // namespace

void write_histogram_tsv(const FrequencyHistogram& h,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("analysis: cannot write " + path.string());
    out << "category\twords\n";
    for (int k = 0; k < 4; ++k)
        out << category_label(k, h.boundaries) << '\t' << h.counts[k] << '\n';
}

void write_comparison_tsv(const CorpusComparison& c,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("analysis: cannot write " + path.string());
    out << "category\twords_a\twords_b\tratio\n";
    for (int k = 0; k < 4; ++k) {
        out << category_label(k, c.a.boundaries) << '\t' << c.a.counts[k]
            << '\t' << c.b.counts[k] << '\t';
        if (std::isnan(c.ratio[k]))
            out << "-";
        else
            out << c.ratio[k];
        out << '\n';
    }
}

void write_comparison_json(const CorpusComparison& c,
                           const std::filesystem::path& path) {
    nlohmann::json j;
    j["boundaries"] = c.a.boundaries.values;
    j["counts_a"] = c.a.counts;
    j["counts_b"] = c.b.counts;
    auto ratios = nlohmann::json::array();
    for (double r : c.ratio) {
        if (std::isnan(r))
            ratios.push_back(nullptr);
        else
            ratios.push_back(r);
    }
    j["ratio"] = std::move(ratios);
    j["zero_overlap"] = c.zero_overlap;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("analysis: cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace bioprep
