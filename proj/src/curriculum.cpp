#include "bioprep/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "bioprep/corpus.hpp"
#include "bioprep/rng.hpp"

namespace bioprep {

std::string to_string(PhaseVersion v) {
    switch (v) {
        case PhaseVersion::V01: return "0.1";
        case PhaseVersion::V02: return "0.2";
        case PhaseVersion::V03: return "0.3";
        case PhaseVersion::V04: return "0.4";
    }
    return "?";
}

PhaseVersion phase_version_from_string(std::string_view s) {
    if (s == "0.1") return PhaseVersion::V01;
    if (s == "0.2") return PhaseVersion::V02;
    if (s == "0.3") return PhaseVersion::V03;
    if (s == "0.4") return PhaseVersion::V04;
    throw std::invalid_argument("unknown phase version: " + std::string(s));
}

MaskingConfig phase_config(PhaseVersion v) {
    switch (v) {
        case PhaseVersion::V01:
            return {MaskingStrategy::Token, 0.15,
                    CorruptionStrategy::EightyTenTen};
        case PhaseVersion::V02:
            return {MaskingStrategy::WholeWord, 0.15,
                    CorruptionStrategy::EightyTenTen};
        case PhaseVersion::V03:
            return {MaskingStrategy::WholeWord, 0.2,
                    CorruptionStrategy::EightyTenTen};
        case PhaseVersion::V04:
            return {MaskingStrategy::WholeWord, 0.2,
                    CorruptionStrategy::MaskOnly};
    }
    throw std::invalid_argument("unknown phase version");
}

void validate_phase_order(const std::vector<CurriculumPhase>& phases) {
    auto strategy_rank = [](MaskingStrategy s) {
        return s == MaskingStrategy::Token ? 0 : 1;
    };
    auto corruption_rank = [](CorruptionStrategy c) {
        return c == CorruptionStrategy::EightyTenTen ? 0 : 1;
    };
    for (std::size_t i = 0; i + 1 < phases.size(); ++i) {
        const auto& a = phases[i].masking;
        const auto& b = phases[i + 1].masking;
        const bool ok = strategy_rank(a.strategy) <= strategy_rank(b.strategy) &&
                        a.rate <= b.rate &&
                        corruption_rank(a.corruption) <=
                            corruption_rank(b.corruption);
        if (!ok)
            throw std::invalid_argument(
                "curriculum: phase " + to_string(phases[i + 1].version) +
                " is not at least as hard as " + to_string(phases[i].version));
    }
}

std::vector<CurriculumPhase> standard_phases(std::int64_t base_steps,
                                             double peak_lr) {
    if (base_steps < 1)
        throw std::invalid_argument("curriculum: base_steps must be >= 1");
    const double ratios[4] = {1.0, 1.25, 1.5, 1.75};
    const PhaseVersion versions[4] = {PhaseVersion::V01, PhaseVersion::V02,
                                      PhaseVersion::V03, PhaseVersion::V04};
    std::vector<CurriculumPhase> phases;
    for (int i = 0; i < 4; ++i) {
        CurriculumPhase p;
        p.version = versions[i];
        p.masking = phase_config(versions[i]);
        p.steps = static_cast<std::int64_t>(
            std::llround(static_cast<double>(base_steps) * ratios[i]));
        p.peak_lr = peak_lr;
        phases.push_back(p);
    }
    validate_phase_order(phases);
    return phases;
}

double lr_at(std::int64_t global_step, const LrPlan& plan,
             std::int64_t total_steps) {
    if (total_steps < 1)
        throw std::invalid_argument("lr_at: total_steps must be >= 1");
    if (plan.warmup_fraction < 0.0 || plan.warmup_fraction >= 1.0)
        throw std::invalid_argument("lr_at: warmup_fraction outside [0, 1)");
    if (global_step < 0 || global_step > total_steps)
        throw std::out_of_range("lr_at: step " + std::to_string(global_step) +
                                " outside [0, " + std::to_string(total_steps) +
                                "]");
    const double total = static_cast<double>(total_steps);
    const double warmup = plan.warmup_fraction * total;
    const double s = static_cast<double>(global_step);
    if (s < warmup) return plan.peak_lr * (s / warmup);
    return plan.peak_lr * (total - s) / (total - warmup);
}

MlmLoss mlm_loss(const MaskedPredictor& predictor, const MlmExample& example) {
    if (example.selected.empty())
        throw std::invalid_argument("mlm_loss: no selected positions");
    MlmLoss out;
    double sum = 0.0;
    double comp = 0.0;  // Kahan
    for (std::size_t i = 0; i < example.selected.size(); ++i) {
        const int pos = example.selected[i];
        const TokenId label = example.labels[i];
        const auto dist = predictor.prob(example.corrupted, pos);
        const double p = dist.at(static_cast<std::size_t>(label));
        if (p <= 0.0) {
            out.zero_probability = true;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        const double term = -std::log(p) - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    out.value = sum / static_cast<double>(example.selected.size());
    return out;
}

double pseudo_perplexity(const MaskedPredictor& predictor,
                         const std::vector<std::vector<TokenId>>& corpus_sample,
                         const Vocab& vocab, const MaskingConfig& config,
                         const EvalOptions& opts) {
    if (opts.n_examples < 1)
        throw std::invalid_argument("pseudo_perplexity: n_examples must be >= 1");
    if (corpus_sample.empty())
        throw std::invalid_argument("pseudo_perplexity: empty corpus sample");

    const auto n = static_cast<std::size_t>(opts.n_examples);
    std::vector<double> losses(n,
                               std::numeric_limits<double>::quiet_NaN());
    detail::run_shard_pool(n, opts.workers, [&](std::size_t i) {
        const auto& seq = corpus_sample[i % corpus_sample.size()];
        const auto ex =
            build_example(seq, vocab, config, mix_seed(opts.seed, i));
        if (ex.selected.empty()) return;  // stays NaN, skipped below
        losses[i] = mlm_loss(predictor, ex).value;
    });

    double sum = 0.0;
    double comp = 0.0;
    std::size_t counted = 0;
    for (double l : losses) {
        if (std::isnan(l)) continue;
        const double term = l - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
        ++counted;
    }
    if (counted == 0)
        throw std::runtime_error(
            "pseudo_perplexity: no example selected any position");
    return std::exp(sum / static_cast<double>(counted));
}

std::vector<DifficultyEntry> difficulty_rank(
    const MaskedPredictor& predictor,
    const std::vector<std::vector<TokenId>>& corpus_sample, const Vocab& vocab,
    const std::vector<MaskingConfig>& configs, const EvalOptions& opts) {
    if (configs.size() < 2)
        throw std::invalid_argument("difficulty_rank: need >= 2 configs");
    std::vector<DifficultyEntry> entries;
    entries.reserve(configs.size());
    for (const auto& c : configs)
        entries.push_back(
            {c, pseudo_perplexity(predictor, corpus_sample, vocab, c, opts),
             0});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const DifficultyEntry& a, const DifficultyEntry& b) {
                         return a.perplexity < b.perplexity;
                     });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].perplexity == entries[i - 1].perplexity)
            entries[i].rank = entries[i - 1].rank;
        else
            entries[i].rank = static_cast<int>(i + 1);
    }
    return entries;
}

namespace {

void write_lr(std::ofstream& out, double lr) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", lr);
    out << buf;
}

}  // namespace

void emit_schedule(const std::vector<CurriculumPhase>& phases,
                   const LrPlan& plan, const std::filesystem::path& path) {
    if (phases.empty())
        throw std::invalid_argument("emit_schedule: no phases");
    validate_phase_order(phases);
    const std::int64_t total = total_steps(phases);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("schedule: cannot write " + path.string());
    out << "step,phase,strategy,rate,corruption,lr\n";
    std::int64_t step = 0;
    for (const auto& phase : phases) {
        for (std::int64_t k = 0; k < phase.steps; ++k, ++step) {
            out << step << ',' << to_string(phase.version) << ','
                << to_string(phase.masking.strategy) << ','
                << phase.masking.rate << ','
                << to_string(phase.masking.corruption) << ',';
            write_lr(out, lr_at(step, plan, total));
            out << '\n';
        }
    }
    if (!out)
        throw std::runtime_error("schedule: write failed " + path.string());
}

void emit_difficulty_report(const std::vector<DifficultyEntry>& entries,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("difficulty: cannot write " + path.string());
    out << "strategy\trate\tcorruption\tperplexity\trank\n";
    for (const auto& e : entries) {
        out << to_string(e.config.strategy) << '\t' << e.config.rate << '\t'
            << to_string(e.config.corruption) << '\t' << e.perplexity << '\t'
            << e.rank << '\n';
    }
    if (!out)
        throw std::runtime_error("difficulty: write failed " + path.string());
}

}  // namespace bioprep
