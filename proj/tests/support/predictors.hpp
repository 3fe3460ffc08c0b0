#pragma once

// Test predictors for the curriculum evaluation: the backoff bigram stands
// in for the base checkpoint at desk scale.

#include <unordered_map>
#include <vector>

#include "bioprep/curriculum.hpp"
#include "bioprep/vocab.hpp"

namespace testutil {

class UniformPredictor : public bioprep::MaskedPredictor {
public:
    explicit UniformPredictor(std::size_t vocab_size) : n_(vocab_size) {}
    std::size_t vocab_size() const override { return n_; }
    std::vector<double> prob(const std::vector<bioprep::TokenId>&,
                             int) const override {
        return std::vector<double>(n_, 1.0 / static_cast<double>(n_));
    }

private:
    std::size_t n_;
};

// Predicts from the previous corrupted token: add-alpha bigram when that
// token was seen in training, otherwise (or at position 0) the smoothed
// unigram.
class BackoffBigramPredictor : public bioprep::MaskedPredictor {
public:
    BackoffBigramPredictor(
        const std::vector<std::vector<bioprep::TokenId>>& corpus,
        std::size_t vocab_size, double alpha = 0.1)
        : n_(vocab_size), alpha_(alpha) {
        for (const auto& seq : corpus) {
            for (std::size_t i = 0; i < seq.size(); ++i) {
                unigram_[seq[i]] += 1.0;
                ++unigram_total_;
                if (i > 0) {
                    auto& row = bigram_[seq[i - 1]];
                    row.counts[seq[i]] += 1.0;
                    row.total += 1.0;
                }
            }
        }
    }

    std::size_t vocab_size() const override { return n_; }

    std::vector<double> prob(const std::vector<bioprep::TokenId>& corrupted,
                             int position) const override {
        const double denom_u =
            unigram_total_ + alpha_ * static_cast<double>(n_);
        std::vector<double> dist(n_, alpha_ / denom_u);
        const Row* row = nullptr;
        if (position > 0) {
            auto it = bigram_.find(corrupted[position - 1]);
            if (it != bigram_.end()) row = &it->second;
        }
        if (row) {
            const double denom =
                row->total + alpha_ * static_cast<double>(n_);
            for (auto& p : dist) p = alpha_ / denom;
            for (const auto& [id, c] : row->counts)
                dist[static_cast<std::size_t>(id)] = (c + alpha_) / denom;
        } else {
            for (const auto& [id, c] : unigram_)
                dist[static_cast<std::size_t>(id)] = (c + alpha_) / denom_u;
        }
        return dist;
    }

private:
    struct Row {
        std::unordered_map<bioprep::TokenId, double> counts;
        double total = 0.0;
    };
    std::size_t n_;
    double alpha_;
    std::unordered_map<bioprep::TokenId, double> unigram_;
    double unigram_total_ = 0.0;
    std::unordered_map<bioprep::TokenId, Row> bigram_;
};

}  // namespace testutil
