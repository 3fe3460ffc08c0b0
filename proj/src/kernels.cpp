#include "bioprep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <type_traits>

#if defined(__x86_64__) || defined(_M_X64)
#include <cpuid.h>
#endif

namespace bioprep::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(_M_X64)
    unsigned int eax, ebx, ecx, edx;
    if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
    const bool avx2 = (ebx & (1u << 5)) != 0;
    if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
    const bool fma = (ecx & (1u << 12)) != 0;
    return avx2 && fma;
#else
    return false;
#endif
}

struct Dispatch {
    Backend backend;
    void (*accumulate)(std::span<double>, std::span<const float>);
    void (*add)(std::span<const double>, std::span<const double>,
                std::span<double>);
    void (*scale)(std::span<double>, double);
    double (*dot)(std::span<const float>, std::span<const float>);
    double (*dot_d)(std::span<const double>, std::span<const double>);
};

constexpr Dispatch kScalar = {
    Backend::Scalar,        detail::accumulate_scalar, detail::add_scalar,
    detail::scale_scalar,   detail::dot_scalar,        detail::dot_d_scalar,
};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Dispatch kAvx2 = {
    Backend::Avx2,        detail::accumulate_avx2, detail::add_avx2,
    detail::scale_avx2,   detail::dot_avx2,        detail::dot_d_avx2,
};
#endif

Dispatch pick_initial() {
#if defined(__x86_64__) || defined(_M_X64)
    bool want_avx2 = cpu_has_avx2_fma();
    if (const char* env = std::getenv("BIOPREP_KERNELS")) {
        std::string v(env);
        if (v == "scalar") want_avx2 = false;
        // "avx2" keeps the CPU-feature decision; forcing it on an
        // unsupported CPU would fault.
    }
    if (want_avx2) return kAvx2;
#endif
    return kScalar;
}

Dispatch g_dispatch = pick_initial();

}  // namespace

Backend active_backend() { return g_dispatch.backend; }

std::string backend_name() {
    switch (g_dispatch.backend) {
        case Backend::Avx2: return "avx2";
        case Backend::Scalar: default: return "scalar";
    }
}

bool force_backend(Backend b) {
    if (b == Backend::Scalar) {
        g_dispatch = kScalar;
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (b == Backend::Avx2 && cpu_has_avx2_fma()) {
        g_dispatch = kAvx2;
        return true;
    }
#endif
    return false;
}

void accumulate(std::span<double> acc, std::span<const float> v) {
    g_dispatch.accumulate(acc, v);
}

void add(std::span<const double> a, std::span<const double> b,
         std::span<double> out) {
    g_dispatch.add(a, b, out);
}

void scale(std::span<double> v, double s) { g_dispatch.scale(v, s); }

double dot(std::span<const float> a, std::span<const float> b) {
    return g_dispatch.dot(a, b);
}

double squared_norm(std::span<const float> v) { return g_dispatch.dot(v, v); }

double dot_d(std::span<const double> a, std::span<const double> b) {
    return g_dispatch.dot_d(a, b);
}

double squared_norm_d(std::span<const double> v) {
    return g_dispatch.dot_d(v, v);
}

double cosine(std::span<const float> a, std::span<const float> b) {
    const double na = squared_norm(a);
    const double nb = squared_norm(b);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("cosine: zero vector");
    return dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

double cosine_d(std::span<const double> a, std::span<const double> b) {
    const double na = squared_norm_d(a);
    const double nb = squared_norm_d(b);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("cosine: zero vector");
    return dot_d(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

// Left-to-right pairwise tree: sum([0,n)) = sum([0,h)) + sum([h,n)) with
// h = n/2 rounded down. The element-wise adds make the result identical on
// every backend.
template <typename Src>
void pairwise_into(const std::vector<Src>& rows, std::size_t lo,
                   std::size_t hi, std::vector<double>& out) {
    if (hi - lo == 1) {
        std::fill(out.begin(), out.end(), 0.0);
        if constexpr (std::is_same_v<Src, std::span<const float>>) {
            g_dispatch.accumulate(out, rows[lo]);
        } else {
            g_dispatch.add(out, rows[lo], out);
        }
        return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<double> right(out.size());
    pairwise_into(rows, lo, mid, out);
    pairwise_into(rows, mid, hi, right);
    g_dispatch.add(out, right, out);
}

template <typename Src>
std::vector<double> pairwise_sum_impl(const std::vector<Src>& rows) {
    if (rows.empty()) return {};
    const std::size_t dim = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != dim)
            throw std::invalid_argument("pairwise_sum: ragged input");
    std::vector<double> out(dim, 0.0);
    pairwise_into(rows, 0, rows.size(), out);
    return out;
}

}  // namespace

std::vector<double> pairwise_sum(
    const std::vector<std::span<const float>>& rows) {
    return pairwise_sum_impl(rows);
}

std::vector<double> pairwise_sum_d(
    const std::vector<std::span<const double>>& rows) {
    return pairwise_sum_impl(rows);
}

std::vector<double> pairwise_mean(
    const std::vector<std::span<const float>>& rows) {
    auto out = pairwise_sum_impl(rows);
    if (!rows.empty()) scale(out, 1.0 / static_cast<double>(rows.size()));
    return out;
}

std::vector<double> pairwise_mean_d(
    const std::vector<std::span<const double>>& rows) {
    auto out = pairwise_sum_impl(rows);
    if (!rows.empty()) scale(out, 1.0 / static_cast<double>(rows.size()));
    return out;
}

}  // namespace bioprep::kernels
