#include "bioprep/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bioprep/unicode.hpp"

namespace bioprep {

CorpusSource CorpusSource::from_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("corpus: not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return CorpusSource(std::move(files));
}

CorpusSource CorpusSource::from_files(
    std::vector<std::filesystem::path> files) {
    return CorpusSource(std::move(files));
}

std::string CorpusSource::shard_name(std::size_t index) const {
    return shards_.at(index).filename().string();
}

void CorpusSource::for_each_document(
    std::size_t shard_index,
    const std::function<void(std::string_view, std::int64_t)>& fn) const {
    const auto& path = shards_.at(shard_index);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("corpus: cannot read shard " + path.string());
    std::string line;
    std::int64_t offset = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        fn(line, offset);
        ++offset;
    }
    if (in.bad())
        throw std::runtime_error("corpus: read error in shard " +
                                 path.string());
}

namespace detail {

void run_shard_pool(std::size_t n_shards, int workers,
                    const std::function<void(std::size_t)>& task) {
    if (workers < 1)
        throw std::invalid_argument("corpus: workers must be >= 1");
    const int n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(workers), n_shards);
    if (n_threads <= 1) {
        for (std::size_t s = 0; s < n_shards; ++s) task(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t s = next.fetch_add(1);
                if (s >= n_shards) return;
                try {
                    task(s);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

namespace {

bool is_terminal(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

std::string_view trim_view(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (static_cast<unsigned char>(s[b]) <= ' ')) ++b;
    while (e > b && (static_cast<unsigned char>(s[e - 1]) <= ' ')) --e;
    return s.substr(b, e - b);
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view document,
                                           const SegmentOptions& opts) {
    std::vector<std::string> sentences;
    const auto cps = uni::decode_all(document);
    // Byte offsets per code point for slicing the original text.
    std::vector<std::size_t> offsets;
    offsets.reserve(cps.size() + 1);
    {
        std::size_t i = 0;
        while (i < document.size()) {
            offsets.push_back(i);
            uni::decode(document, i);
        }
        offsets.push_back(document.size());
    }
    const std::size_t n = cps.size();

    auto preceding_token_is_abbrev = [&](std::size_t punct_pos) {
        // Token = run of non-whitespace ending right before punct_pos,
        // with the punctuation run itself included while scanning back.
        std::size_t end = punct_pos;  // exclusive, points at the '.'
        std::size_t begin = end;
        while (begin > 0 && !uni::is_whitespace(cps[begin - 1])) --begin;
        if (begin == end) return false;
        // Leading punctuation like "(cf." must not hide the abbreviation.
        while (begin < end && uni::is_punctuation(cps[begin])) ++begin;
        std::string token;
        for (std::size_t k = begin; k < end; ++k)
            uni::encode(uni::to_lower(cps[k]), token);
        while (!token.empty() && token.back() == '.') token.pop_back();
        if (token.empty()) return false;
        return std::find(opts.abbreviations.begin(), opts.abbreviations.end(),
                         token) != opts.abbreviations.end();
    };

    std::size_t start = 0;
    std::size_t i = 0;
    auto emit = [&](std::size_t end_cp) {
        auto piece =
            trim_view(document.substr(offsets[start],
                                      offsets[end_cp] - offsets[start]));
        if (!piece.empty()) sentences.emplace_back(piece);
        start = end_cp;
    };
    while (i < n) {
        if (!is_terminal(cps[i])) {
            ++i;
            continue;
        }
        const std::size_t punct_start = i;
        std::size_t j = i;
        while (j < n && is_terminal(cps[j])) ++j;
        // Boundary requires whitespace then an uppercase letter or digit.
        std::size_t k = j;
        while (k < n && uni::is_whitespace(cps[k])) ++k;
        const bool ws_after = k > j;
        const bool starts_new =
            k < n && (uni::is_upper(cps[k]) || uni::is_digit(cps[k]));
        const bool abbrev =
            cps[punct_start] == '.' && preceding_token_is_abbrev(punct_start);
        if (ws_after && starts_new && !abbrev) {
            emit(j);
            i = k;
            start = k;
        } else {
            i = j;
        }
    }
    emit(n);
    return sentences;
}

std::vector<std::string> frequency_words(std::string_view line) {
    std::vector<std::string> words;
    const auto cps = uni::decode_all(line);
    std::size_t i = 0;
    const std::size_t n = cps.size();
    while (i < n) {
        while (i < n && uni::is_whitespace(cps[i])) ++i;
        std::size_t j = i;
        while (j < n && !uni::is_whitespace(cps[j])) ++j;
        if (j > i) {
            std::size_t b = i, e = j;
            while (b < e && uni::is_punctuation(cps[b])) ++b;
            while (e > b && uni::is_punctuation(cps[e - 1])) --e;
            if (e > b) {
                std::string w;
                for (std::size_t k = b; k < e; ++k)
                    uni::encode(uni::to_lower(cps[k]), w);
                words.push_back(std::move(w));
            }
        }
        i = j;
    }
    return words;
}

std::uint64_t FrequencyTable::total() const {
    std::uint64_t t = 0;
    for (const auto& [_, c] : counts) t += c;
    return t;
}

FrequencyTable count_frequencies(const CorpusSource& corpus, int workers) {
    auto partials = map_shards<FrequencyTable>(
        corpus, workers, [&](std::size_t s) {
            FrequencyTable local;
            corpus.for_each_document(s, [&](std::string_view doc, std::int64_t) {
                for (auto& w : frequency_words(doc)) ++local.counts[w];
            });
            return local;
        });
    FrequencyTable merged;
    for (auto& p : partials) {
        if (merged.counts.empty()) {
            merged.counts = std::move(p.counts);
            continue;
        }
        for (auto& [w, c] : p.counts) merged.counts[w] += c;
    }
    return merged;
}

void write_frequency_tsv(const FrequencyTable& table,
                         const std::filesystem::path& path) {
    std::vector<std::pair<std::string_view, std::uint64_t>> rows;
    rows.reserve(table.counts.size());
    for (const auto& [w, c] : table.counts) rows.emplace_back(w, c);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("frequency: cannot write " + path.string());
    for (const auto& [w, c] : rows) out << w << '\t' << c << '\n';
    if (!out)
        throw std::runtime_error("frequency: write failed " + path.string());
}

FrequencyTable read_frequency_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("frequency: cannot open " + path.string());
    FrequencyTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("frequency: malformed line in " +
                                     path.string());
        table.counts[line.substr(0, tab)] =
            std::stoull(line.substr(tab + 1));
    }
    return table;
}

}  // namespace bioprep
