#include "bioprep/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bioprep/rng.hpp"

namespace bioprep {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("not a boolean: " + v);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "corpus_dir",        "base_vocab",       "domain_vocab",
        "base_matrix",       "lowercase",        "strip_accents",
        "split_cjk",         "max_word_chars",   "scan_cap",
        "scan_dedup",        "segmenter",        "masking_strategy",
        "masking_rate",      "corruption_strategy", "phase_base_steps",
        "phase_steps",       "peak_lr",          "warmup_proportion",
        "boundaries",        "max_len",          "seed",
        "workers",
    };
    return keys;
}

}  // namespace

RunConfig config_from_pairs(const std::map<std::string, std::string>& pairs) {
    RunConfig c;
    c.raw = pairs;
    auto get = [&](const char* key) -> const std::string* {
        auto it = pairs.find(key);
        return it == pairs.end() ? nullptr : &it->second;
    };
    if (auto* v = get("corpus_dir")) c.corpus_dir = *v;
    if (auto* v = get("base_vocab")) c.base_vocab = *v;
    if (auto* v = get("domain_vocab")) c.domain_vocab = *v;
    if (auto* v = get("base_matrix")) c.base_matrix = *v;
    if (auto* v = get("lowercase")) c.tokenizer.lowercase = parse_bool(*v);
    if (auto* v = get("strip_accents"))
        c.tokenizer.strip_accents = parse_bool(*v);
    if (auto* v = get("split_cjk")) c.tokenizer.split_cjk = parse_bool(*v);
    if (auto* v = get("max_word_chars"))
        c.tokenizer.max_word_chars = std::stoul(*v);
    if (auto* v = get("scan_cap")) c.scan_cap = std::stoi(*v);
    if (auto* v = get("scan_dedup")) c.scan_dedup = parse_bool(*v);
    if (auto* v = get("segmenter")) c.segmenter = *v;
    if (auto* v = get("masking_strategy"))
        c.masking.strategy = masking_strategy_from_string(*v);
    if (auto* v = get("masking_rate")) c.masking.rate = std::stod(*v);
    if (auto* v = get("corruption_strategy"))
        c.masking.corruption = corruption_strategy_from_string(*v);
    if (auto* v = get("phase_base_steps")) c.phase_base_steps = std::stoll(*v);
    if (auto* v = get("phase_steps")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ','))
            c.phase_steps.push_back(std::stoll(trim(item)));
    }
    if (auto* v = get("peak_lr")) c.peak_lr = std::stod(*v);
    if (auto* v = get("warmup_proportion")) c.warmup_proportion = std::stod(*v);
    if (auto* v = get("boundaries")) {
        std::stringstream ss(*v);
        std::string item;
        std::vector<std::uint64_t> vals;
        while (std::getline(ss, item, ','))
            vals.push_back(std::stoull(trim(item)));
        if (vals.size() != 3)
            throw std::invalid_argument("boundaries needs 3 values");
        c.boundaries.values = {vals[0], vals[1], vals[2]};
    }
    if (auto* v = get("max_len")) c.max_len = std::stoi(*v);
    if (auto* v = get("seed")) c.seed = std::stoull(*v);
    if (auto* v = get("workers")) c.workers = std::stoi(*v);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path.string());
    std::map<std::string, std::string> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: missing '=' at " +
                                     path.string() + ":" +
                                     std::to_string(line_no));
        pairs[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return config_from_pairs(pairs);
}

std::vector<std::string> validate_config(
    const RunConfig& config, const std::vector<std::string>& required_paths) {
    std::vector<std::string> problems;
    for (const auto& [key, _] : config.raw) {
        const auto& known = known_keys();
        if (std::find(known.begin(), known.end(), key) == known.end())
            problems.push_back("unknown key: " + key);
    }
    auto check_path = [&](const std::string& name, const std::string& value) {
        if (value.empty()) {
            problems.push_back("missing required path: " + name);
        } else if (!std::filesystem::exists(value)) {
            problems.push_back(name + " does not exist: " + value);
        }
    };
    for (const auto& name : required_paths) {
        if (name == "corpus_dir") check_path(name, config.corpus_dir);
        else if (name == "base_vocab") check_path(name, config.base_vocab);
        else if (name == "domain_vocab") check_path(name, config.domain_vocab);
        else if (name == "base_matrix") check_path(name, config.base_matrix);
    }
    if (config.masking.rate < 0.0 || config.masking.rate > 1.0)
        problems.push_back("masking_rate outside [0,1]");
    if (config.scan_cap < 1) problems.push_back("scan_cap must be >= 1");
    if (config.workers < 1) problems.push_back("workers must be >= 1");
    if (config.max_len < 2) problems.push_back("max_len must be >= 2");
    if (config.warmup_proportion < 0.0 || config.warmup_proportion >= 1.0)
        problems.push_back("warmup_proportion outside [0,1)");
    if (config.peak_lr < 0.0) problems.push_back("peak_lr must be >= 0");
    if (config.phase_base_steps < 1)
        problems.push_back("phase_base_steps must be >= 1");
    if (!config.phase_steps.empty() && config.phase_steps.size() != 4)
        problems.push_back("phase_steps needs exactly 4 values");
    if (!(config.boundaries.values[0] > 0 &&
          config.boundaries.values[0] < config.boundaries.values[1] &&
          config.boundaries.values[1] < config.boundaries.values[2]))
        problems.push_back("boundaries must be strictly ascending positive");
    if (config.segmenter != "rule-based")
        problems.push_back("unknown segmenter: " + config.segmenter);
    return problems;
}

std::uint64_t config_hash(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : config.raw) {
        h = fnv1a(k, h);
        h = fnv1a("=", h);
        h = fnv1a(v, h);
        h = fnv1a("\n", h);
    }
    return h;
}

std::vector<std::vector<TokenId>> pack_sequences(const CorpusSource& corpus,
                                                 const Vocab& vocab,
                                                 int max_len,
                                                 const TokenizerOptions& opts,
                                                 const SegmentOptions& seg) {
    if (max_len < 2)
        throw std::invalid_argument("pack_sequences: max_len must be >= 2");
    const std::size_t budget = static_cast<std::size_t>(max_len) - 2;
    const TokenId cls = vocab.specials().cls;
    const TokenId sep = vocab.specials().sep;

    std::vector<std::vector<TokenId>> sequences;
    std::vector<TokenId> current;
    auto flush = [&] {
        if (current.empty()) return;
        std::vector<TokenId> seq;
        seq.reserve(current.size() + 2);
        seq.push_back(cls);
        seq.insert(seq.end(), current.begin(), current.end());
        seq.push_back(sep);
        sequences.push_back(std::move(seq));
        current.clear();
    };

    for (std::size_t s = 0; s < corpus.shard_count(); ++s) {
        corpus.for_each_document(s, [&](std::string_view doc, std::int64_t) {
            for (const auto& sentence : segment_sentences(doc, seg)) {
                auto ids = encode(sentence, vocab, opts);
                if (ids.empty()) continue;
                if (ids.size() > budget) {
                    // Oversized sentence: flush, then hard split.
                    flush();
                    for (std::size_t off = 0; off < ids.size(); off += budget) {
                        const std::size_t len =
                            std::min(budget, ids.size() - off);
                        current.assign(ids.begin() + off,
                                       ids.begin() + off + len);
                        flush();
                    }
                    continue;
                }
                if (current.size() + ids.size() > budget) flush();
                current.insert(current.end(), ids.begin(), ids.end());
            }
            flush();  // no cross-document packing
        });
    }
    return sequences;
}

}  // namespace bioprep
