#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bioprep/masking.hpp"
#include "bioprep/vocab.hpp"

namespace bioprep {

enum class PhaseVersion { V01, V02, V03, V04 };

std::string to_string(PhaseVersion v);  // "0.1" .. "0.4"
PhaseVersion phase_version_from_string(std::string_view s);

// The four-phase table:
//   0.1  token       0.15  80-10-10
//   0.2  whole-word  0.15  80-10-10
//   0.3  whole-word  0.20  80-10-10
//   0.4  whole-word  0.20  mask-only
MaskingConfig phase_config(PhaseVersion v);

struct CurriculumPhase {
    PhaseVersion version;
    MaskingConfig masking;
    std::int64_t steps = 0;
    double peak_lr = 0.0;
};

// All four phases with the default step ratio 1 : 1.25 : 1.5 : 1.75 applied
// to base_steps. Validates the non-decreasing difficulty ordering.
std::vector<CurriculumPhase> standard_phases(std::int64_t base_steps,
                                             double peak_lr);
void validate_phase_order(const std::vector<CurriculumPhase>& phases);

struct LrPlan {
    double peak_lr = 1e-4;
    double warmup_fraction = 0.06;  // in [0, 1)
};

// One global schedule across all phases: linear warmup from 0 to peak over
// warmup_fraction of the total steps, then linear decay to 0 at the final
// step. Phase restarts continue the schedule; there is no re-warmup.
// `total_steps` is the last step of the last phase. Steps outside
// [0, total_steps] are an error.
double lr_at(std::int64_t global_step, const LrPlan& plan,
             std::int64_t total_steps);

inline std::int64_t total_steps(const std::vector<CurriculumPhase>& phases) {
    std::int64_t t = 0;
    for (const auto& p : phases) t += p.steps;
    return t;
}

// prob(corrupted, position) is a distribution over the vocabulary.
class MaskedPredictor {
public:
    virtual ~MaskedPredictor() = default;
    virtual std::size_t vocab_size() const = 0;
    virtual std::vector<double> prob(const std::vector<TokenId>& corrupted,
                                     int position) const = 0;
    virtual bool reentrant() const { return true; }
};

struct MlmLoss {
    double value = 0.0;
    // Set when some label had probability zero; value is +infinity then.
    bool zero_probability = false;
};

// Mean over the selected positions of -log p(label | corrupted context).
// The example must have at least one selected position.
MlmLoss mlm_loss(const MaskedPredictor& predictor, const MlmExample& example);

struct EvalOptions {
    std::uint64_t seed = 0;
    int n_examples = 1;
    int workers = 1;
};

// exp of the mean mlm_loss over n_examples examples built from
// corpus_sample (cycled) under `config`. Examples that select nothing are
// skipped; per-example losses are reduced in index order with compensated
// summation, so the value does not depend on evaluation parallelism.
double pseudo_perplexity(const MaskedPredictor& predictor,
                         const std::vector<std::vector<TokenId>>& corpus_sample,
                         const Vocab& vocab, const MaskingConfig& config,
                         const EvalOptions& opts);

struct DifficultyEntry {
    MaskingConfig config;
    double perplexity = 0.0;
    int rank = 0;  // competition ranking; ties share a rank
};

// Evaluates every config with the same seed and sorts ascending by
// perplexity (stable, so ties keep their input order).
std::vector<DifficultyEntry> difficulty_rank(
    const MaskedPredictor& predictor,
    const std::vector<std::vector<TokenId>>& corpus_sample, const Vocab& vocab,
    const std::vector<MaskingConfig>& configs, const EvalOptions& opts);

// CSV `step,phase,strategy,rate,corruption,lr`, one row per global step.
void emit_schedule(const std::vector<CurriculumPhase>& phases,
                   const LrPlan& plan, const std::filesystem::path& path);

// TSV `strategy rate corruption perplexity rank`.
void emit_difficulty_report(const std::vector<DifficultyEntry>& entries,
                            const std::filesystem::path& path);

}  // namespace bioprep
