#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Vector arithmetic used by the embedding and analysis code paths.
//
// Every kernel has a scalar reference implementation and may have SIMD
// variants; the active backend is chosen once at startup from CPU features
// and can be overridden with force_backend() or the BIOPREP_KERNELS
// environment variable ("scalar" or "avx2"). Element-wise kernels produce
// bit-identical results on every backend; dot-product reductions may differ
// by a few ulps because lane order changes, which the callers' tolerances
// absorb.
namespace bioprep::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
std::string backend_name();
// Returns false if the requested backend is unavailable on this CPU.
bool force_backend(Backend b);

// acc[i] += v[i]
void accumulate(std::span<double> acc, std::span<const float> v);
// out[i] = a[i] + b[i]
void add(std::span<const double> a, std::span<const double> b,
         std::span<double> out);
// v[i] *= s
void scale(std::span<double> v, double s);
// Accumulated in double regardless of backend.
double dot(std::span<const float> a, std::span<const float> b);
double squared_norm(std::span<const float> v);
double dot_d(std::span<const double> a, std::span<const double> b);
double squared_norm_d(std::span<const double> v);

// cosine(a, b) = dot / (|a| |b|)
double cosine(std::span<const float> a, std::span<const float> b);
double cosine_d(std::span<const double> a, std::span<const double> b);

// Sum of k vectors with a fixed left-to-right pairwise reduction tree,
// independent of backend and thread count. rows views must all have equal
// dimension. Returns the empty vector for an empty input.
std::vector<double> pairwise_sum(const std::vector<std::span<const float>>& rows);
std::vector<double> pairwise_sum_d(const std::vector<std::span<const double>>& rows);

// pairwise_sum / n
std::vector<double> pairwise_mean(const std::vector<std::span<const float>>& rows);
std::vector<double> pairwise_mean_d(const std::vector<std::span<const double>>& rows);

namespace detail {
// Per-backend entry points, exposed for equivalence tests.
void accumulate_scalar(std::span<double> acc, std::span<const float> v);
void add_scalar(std::span<const double> a, std::span<const double> b,
                std::span<double> out);
void scale_scalar(std::span<double> v, double s);
double dot_scalar(std::span<const float> a, std::span<const float> b);
double dot_d_scalar(std::span<const double> a, std::span<const double> b);

#if defined(__x86_64__) || defined(_M_X64)
void accumulate_avx2(std::span<double> acc, std::span<const float> v);
void add_avx2(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
void scale_avx2(std::span<double> v, double s);
double dot_avx2(std::span<const float> a, std::span<const float> b);
double dot_d_avx2(std::span<const double> a, std::span<const double> b);
#endif
}  // namespace detail

}  // namespace bioprep::kernels
