// bioprep: vocabulary transfer and MLM data preparation pipeline.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bioprep/analysis.hpp"
#include "bioprep/config.hpp"
#include "bioprep/curriculum.hpp"
#include "bioprep/embedding.hpp"
#include "bioprep/kernels.hpp"
#include "bioprep/masking.hpp"
#include "bioprep/scan.hpp"
#include "bioprep/wordpiece.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--config", common.config_path, "key = value config file");
    cmd->add_option("--seed", common.seed, "override the config seed");
    cmd->add_option("--workers", common.workers,
                    "override the config worker count");
}

bioprep::RunConfig resolve_config(const Common& common,
                                  const std::vector<std::string>& required) {
    bioprep::RunConfig config;
    if (!common.config_path.empty()) {
        try {
            config = bioprep::load_config(common.config_path);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    if (common.seed) {
        config.seed = *common.seed;
        config.raw["seed"] = std::to_string(*common.seed);
    }
    if (common.workers) {
        config.workers = *common.workers;
        config.raw["workers"] = std::to_string(*common.workers);
    }
    auto problems = bioprep::validate_config(config, required);
    if (!problems.empty()) {
        std::string msg;
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (i) msg += "; ";
            msg += problems[i];
        }
        throw ConfigError(msg);
    }
    return config;
}

void print_stanza(const bioprep::RunConfig& config) {
    std::printf("# bioprep %s config_hash=%016" PRIx64 " seed=%" PRIu64
                " workers=%d kernels=%s\n",
                kVersion, bioprep::config_hash(config), config.seed,
                config.workers, bioprep::kernels::backend_name().c_str());
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

// --- subcommand bodies ----------------------------------------------------

int cmd_train_vocab(const Common& common, std::size_t target_size,
                    const std::string& out) {
    auto config = resolve_config(common, {"corpus_dir"});
    print_stanza(config);
    const auto corpus = bioprep::CorpusSource::from_dir(config.corpus_dir);
    bioprep::TrainerOptions opts;
    opts.tokenizer = config.tokenizer;
    opts.workers = config.workers;
    const auto vocab = bioprep::train_vocab(corpus, target_size, opts);
    vocab.save(out);
    std::printf("wrote %zu tokens to %s\n", vocab.size(), out.c_str());
    return kExitOk;
}

int cmd_scan(const Common& common, const std::string& targets_file,
             std::vector<std::string> targets, const std::string& out) {
    auto config = resolve_config(common, {"corpus_dir", "domain_vocab"});
    print_stanza(config);
    if (!targets_file.empty()) {
        auto more = read_lines(targets_file);
        targets.insert(targets.end(), more.begin(), more.end());
    }
    if (targets.empty())
        throw ConfigError("scan: no targets given (--targets or --token)");
    const auto corpus = bioprep::CorpusSource::from_dir(config.corpus_dir);
    const auto vocab = bioprep::Vocab::load(config.domain_vocab);
    bioprep::ScanOptions opts;
    opts.cap = config.scan_cap;
    opts.seed = config.seed;
    opts.workers = config.workers;
    opts.dedup_sentences = config.scan_dedup;
    opts.tokenizer = config.tokenizer;
    const auto hits = bioprep::scan_for_tokens(corpus, targets, vocab, opts);
    bioprep::write_hits_jsonl(hits, out);
    std::size_t total = 0;
    for (const auto& [_, list] : hits) total += list.size();
    std::printf("wrote %zu hits for %zu tokens to %s\n", total, hits.size(),
                out.c_str());
    return kExitOk;
}

int cmd_diff(const Common& common, const std::string& out) {
    auto config = resolve_config(common, {"domain_vocab", "base_vocab"});
    print_stanza(config);
    const auto domain = bioprep::Vocab::load(config.domain_vocab);
    const auto base = bioprep::Vocab::load(config.base_vocab);
    const auto mapping = bioprep::diff_vocab(domain, base);
    nlohmann::json j;
    j["shared"] = mapping.shared;
    j["new"] = mapping.new_ids;
    j["coverage_ratio"] = mapping.coverage_ratio;
    std::ofstream o(out, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + out);
    o << j.dump(2) << '\n';
    std::printf("shared=%zu new=%zu coverage=%.6f\n", mapping.shared.size(),
                mapping.new_ids.size(), mapping.coverage_ratio);
    return kExitOk;
}

int cmd_build_matrix(const Common& common, const std::string& mode_name,
                     const std::string& hits_path,
                     const std::string& emit_requests,
                     const std::string& context_vectors, int scratch_dim,
                     bool exclude_distilled, const std::string& out) {
    const auto mode = bioprep::init_mode_from_string(mode_name);
    std::vector<std::string> required;
    switch (mode) {
        case bioprep::InitMode::Scratch:
            required = {"domain_vocab"};
            break;
        case bioprep::InitMode::Continued:
            required = {"base_vocab", "base_matrix"};
            break;
        default:
            required = {"domain_vocab", "base_vocab", "base_matrix"};
            break;
    }
    auto config = resolve_config(common, required);
    print_stanza(config);

    std::optional<bioprep::Vocab> domain, base;
    if (!config.domain_vocab.empty())
        domain.emplace(bioprep::Vocab::load(config.domain_vocab));
    if (!config.base_vocab.empty())
        base.emplace(bioprep::Vocab::load(config.base_vocab));

    bioprep::BuildInputs inputs;
    bioprep::BuildOptions opts;
    opts.seed = config.seed;
    opts.workers = config.workers;
    opts.tokenizer = config.tokenizer;
    opts.contextualize.include_distilled = !exclude_distilled;

    inputs.domain = domain ? &*domain : nullptr;
    inputs.base = base ? &*base : nullptr;
    inputs.scratch_dim = scratch_dim;

    std::optional<bioprep::TokenMapping> mapping;
    if (domain && base) {
        mapping = bioprep::diff_vocab(*domain, *base);
        inputs.mapping = &*mapping;
    }

    bioprep::ScanResult hits;
    if (mode == bioprep::InitMode::Contextualized) {
        if (hits_path.empty())
            throw ConfigError("contextualized mode needs --hits");
        hits = bioprep::read_hits_jsonl(hits_path);
        // Tokens never scanned still need a key; a scan that found nothing
        // writes no record for them.
        for (bioprep::TokenId id : mapping->new_ids)
            hits.try_emplace(domain->token(id));
        inputs.hits = &hits;
        if (!emit_requests.empty()) {
            const auto bundle =
                bioprep::make_context_requests(hits, *domain, *base,
                                               config.tokenizer);
            bioprep::write_context_requests(bundle, emit_requests);
            std::printf("wrote %zu context requests to %s\n",
                        bundle.requests.size(), emit_requests.c_str());
            return kExitOk;
        }
    }

    std::optional<bioprep::MatrixProvider> matrix_provider;
    std::optional<bioprep::PrecomputedProvider> precomputed_provider;
    if (mode != bioprep::InitMode::Scratch) {
        auto static_rows = bioprep::import_matrix(config.base_matrix);
        if (static_rows.rows() != base->size())
            throw std::runtime_error(
                "base matrix rows do not match the base vocab");
        if (!context_vectors.empty()) {
            auto bundle = bioprep::make_context_requests(
                hits, *domain, *base, config.tokenizer);
            auto responses =
                bioprep::read_vector_responses(context_vectors);
            precomputed_provider.emplace(std::move(static_rows),
                                         std::move(bundle),
                                         std::move(responses));
            inputs.provider = &*precomputed_provider;
        } else {
            matrix_provider.emplace(std::move(static_rows));
            inputs.provider = &*matrix_provider;
        }
    }

    auto build = bioprep::build_embedding_matrix(mode, inputs, opts);
    for (const auto& w : build.warnings)
        std::fprintf(stderr, "bioprep: warning: %s\n", w.c_str());

    bioprep::MatrixManifest manifest;
    const auto& hashed_vocab =
        mode == bioprep::InitMode::Continued ? *base : *domain;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016" PRIx64, hashed_vocab.content_hash());
    manifest.vocab_hash = hex;
    manifest.mode = bioprep::to_string(mode);
    manifest.seed = config.seed;
    bioprep::export_matrix(build.matrix, out, manifest);
    std::printf("wrote %zux%d matrix to %s\n", build.matrix.rows(),
                build.matrix.dim(), out.c_str());
    return kExitOk;
}

int cmd_collate(const Common& common, const std::string& out_jsonl,
                const std::string& out_packed) {
    auto config = resolve_config(common, {"corpus_dir", "domain_vocab"});
    print_stanza(config);
    if (out_jsonl.empty() && out_packed.empty())
        throw ConfigError("collate: need --out-jsonl and/or --out-packed");
    const auto corpus = bioprep::CorpusSource::from_dir(config.corpus_dir);
    const auto vocab = bioprep::Vocab::load(config.domain_vocab);
    const auto sequences = bioprep::pack_sequences(
        corpus, vocab, config.max_len, config.tokenizer);
    std::vector<bioprep::MlmExample> examples;
    examples.reserve(sequences.size());
    for (std::size_t i = 0; i < sequences.size(); ++i)
        examples.push_back(bioprep::build_example(
            sequences[i], vocab, config.masking,
            bioprep::mix_seed(config.seed, i)));
    if (!out_jsonl.empty()) bioprep::write_examples_jsonl(examples, out_jsonl);
    if (!out_packed.empty())
        bioprep::write_examples_packed(examples, out_packed);
    std::printf("wrote %zu examples\n", examples.size());
    return kExitOk;
}

int cmd_schedule(const Common& common, const std::string& out) {
    auto config = resolve_config(common, {});
    print_stanza(config);
    std::vector<bioprep::CurriculumPhase> phases =
        bioprep::standard_phases(config.phase_base_steps, config.peak_lr);
    if (!config.phase_steps.empty()) {
        for (int i = 0; i < 4; ++i) phases[i].steps = config.phase_steps[i];
    }
    bioprep::LrPlan plan{config.peak_lr, config.warmup_proportion};
    bioprep::emit_schedule(phases, plan, out);
    std::printf("wrote %" PRId64 " schedule rows to %s\n",
                bioprep::total_steps(phases), out.c_str());
    return kExitOk;
}

int cmd_freq(const Common& common, const std::string& out,
             const std::string& histogram_out, const std::string& compare_dir,
             const std::string& compare_out) {
    auto config = resolve_config(common, {"corpus_dir"});
    print_stanza(config);
    const auto corpus = bioprep::CorpusSource::from_dir(config.corpus_dir);
    const auto table = bioprep::count_frequencies(corpus, config.workers);
    if (!out.empty()) bioprep::write_frequency_tsv(table, out);
    if (!histogram_out.empty()) {
        const auto h = bioprep::bucket_frequencies(table, config.boundaries);
        bioprep::write_histogram_tsv(h, histogram_out);
    }
    if (!compare_dir.empty()) {
        if (compare_out.empty())
            throw ConfigError("freq: --compare-dir needs --compare-out");
        const auto other = bioprep::CorpusSource::from_dir(compare_dir);
        const auto other_table =
            bioprep::count_frequencies(other, config.workers);
        const auto cmp =
            bioprep::compare_corpora(table, other_table, config.boundaries);
        bioprep::write_comparison_tsv(cmp, compare_out + ".tsv");
        bioprep::write_comparison_json(cmp, compare_out + ".json");
    }
    std::printf("counted %zu distinct words (%" PRIu64 " total)\n",
                table.counts.size(), table.total());
    return kExitOk;
}

int cmd_anisotropy(const Common& common, const std::string& matrix_path,
                   std::uint64_t pairs, const std::string& out) {
    auto config = resolve_config(common, {});
    print_stanza(config);
    const auto matrix = bioprep::import_matrix(matrix_path);
    bioprep::AnisotropyOptions opts;
    opts.seed = config.seed;
    opts.pairs = pairs;
    const double value = bioprep::anisotropy_rows(matrix, opts);
    std::printf("anisotropy\t%.12g\n", value);
    if (!out.empty()) {
        std::ofstream o(out, std::ios::binary);
        if (!o) throw std::runtime_error("cannot write " + out);
        o << "anisotropy\t" << value << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vocabulary transfer and MLM data preparation pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    int rc = kExitOk;
    std::function<int()> run;

    // train-vocab
    {
        auto* cmd = app.add_subcommand("train-vocab",
                                       "train a WordPiece vocabulary");
        add_common(cmd, common);
        auto target_size = std::make_shared<std::size_t>(0);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--target-size", *target_size, "vocabulary size")
            ->required();
        cmd->add_option("--out", *out, "output vocab.txt")->required();
        cmd->callback([&, target_size, out] {
            run = [&, target_size, out] {
                return cmd_train_vocab(common, *target_size, *out);
            };
        });
    }
    // scan
    {
        auto* cmd = app.add_subcommand(
            "scan", "extract sentences containing target tokens");
        add_common(cmd, common);
        auto targets_file = std::make_shared<std::string>();
        auto tokens = std::make_shared<std::vector<std::string>>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--targets", *targets_file,
                        "file with one target token per line");
        cmd->add_option("--token", *tokens, "target token (repeatable)");
        cmd->add_option("--out", *out, "output hits JSONL")->required();
        cmd->callback([&, targets_file, tokens, out] {
            run = [&, targets_file, tokens, out] {
                return cmd_scan(common, *targets_file, *tokens, *out);
            };
        });
    }
    // diff
    {
        auto* cmd = app.add_subcommand(
            "diff", "classify a domain vocab against a base vocab");
        add_common(cmd, common);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--out", *out, "output mapping JSON")->required();
        cmd->callback([&, out] {
            run = [&, out] { return cmd_diff(common, *out); };
        });
    }
    // build-matrix
    {
        auto* cmd = app.add_subcommand("build-matrix",
                                       "build the embedding matrix");
        add_common(cmd, common);
        auto mode = std::make_shared<std::string>();
        auto hits = std::make_shared<std::string>();
        auto emit_requests = std::make_shared<std::string>();
        auto context_vectors = std::make_shared<std::string>();
        auto dim = std::make_shared<int>(0);
        auto exclude_distilled = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--mode", *mode,
                        "scratch|continued|averaged|contextualized")
            ->required();
        cmd->add_option("--hits", *hits, "scan hits JSONL");
        cmd->add_option("--emit-requests", *emit_requests,
                        "write the context-request JSONL and stop");
        cmd->add_option("--context-vectors", *context_vectors,
                        "precomputed span vectors (binary)");
        cmd->add_option("--dim", *dim, "dimension (scratch mode)");
        cmd->add_flag("--exclude-distilled", *exclude_distilled,
                      "do not average the distilled vector into the "
                      "aggregation set");
        cmd->add_option("--out", *out, "output matrix file");
        cmd->callback([&, mode, hits, emit_requests, context_vectors, dim,
                       exclude_distilled, out] {
            run = [&, mode, hits, emit_requests, context_vectors, dim,
                   exclude_distilled, out] {
                if (out->empty() && emit_requests->empty())
                    throw ConfigError("build-matrix: need --out");
                return cmd_build_matrix(common, *mode, *hits, *emit_requests,
                                        *context_vectors, *dim,
                                        *exclude_distilled, *out);
            };
        });
    }
    // collate
    {
        auto* cmd = app.add_subcommand(
            "collate", "pack sequences and build MLM examples");
        add_common(cmd, common);
        auto out_jsonl = std::make_shared<std::string>();
        auto out_packed = std::make_shared<std::string>();
        cmd->add_option("--out-jsonl", *out_jsonl, "examples as JSONL");
        cmd->add_option("--out-packed", *out_packed, "examples as binary");
        cmd->callback([&, out_jsonl, out_packed] {
            run = [&, out_jsonl, out_packed] {
                return cmd_collate(common, *out_jsonl, *out_packed);
            };
        });
    }
    // schedule
    {
        auto* cmd = app.add_subcommand("schedule",
                                       "emit the curriculum schedule manifest");
        add_common(cmd, common);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--out", *out, "output CSV")->required();
        cmd->callback([&, out] {
            run = [&, out] { return cmd_schedule(common, *out); };
        });
    }
    // freq
    {
        auto* cmd = app.add_subcommand("freq",
                                       "word frequency table and histogram");
        add_common(cmd, common);
        auto out = std::make_shared<std::string>();
        auto histogram_out = std::make_shared<std::string>();
        auto compare_dir = std::make_shared<std::string>();
        auto compare_out = std::make_shared<std::string>();
        cmd->add_option("--out", *out, "frequency TSV");
        cmd->add_option("--histogram-out", *histogram_out, "histogram TSV");
        cmd->add_option("--compare-dir", *compare_dir,
                        "second corpus directory to compare against");
        cmd->add_option("--compare-out", *compare_out,
                        "comparison output prefix (.tsv/.json)");
        cmd->callback([&, out, histogram_out, compare_dir, compare_out] {
            run = [&, out, histogram_out, compare_dir, compare_out] {
                return cmd_freq(common, *out, *histogram_out, *compare_dir,
                                *compare_out);
            };
        });
    }
    // anisotropy
    {
        auto* cmd = app.add_subcommand("anisotropy",
                                       "mean pairwise cosine of matrix rows");
        add_common(cmd, common);
        auto matrix = std::make_shared<std::string>();
        auto pairs = std::make_shared<std::uint64_t>(100000);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--matrix", *matrix, "embedding matrix file")
            ->required();
        cmd->add_option("--pairs", *pairs, "sampled pair count");
        cmd->add_option("--out", *out, "report TSV");
        cmd->callback([&, matrix, pairs, out] {
            run = [&, matrix, pairs, out] {
                return cmd_anisotropy(common, *matrix, *pairs, *out);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
        app.exit(e);
        return kExitUsage;
    }

    try {
        rc = run();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "bioprep: error: config: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bioprep: error: runtime: %s\n", e.what());
        return kExitRuntime;
    }
    return rc;
}
