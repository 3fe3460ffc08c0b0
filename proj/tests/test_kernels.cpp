#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bioprep/kernels.hpp"
#include "bioprep/rng.hpp"

using namespace bioprep;

namespace {

std::vector<float> random_floats(Rng& rng, std::size_t n) {
    std::vector<float> v(n);
    for (auto& x : v)
        x = static_cast<float>(rng.uniform_real() * 2.0 - 1.0);
    return v;
}

std::vector<double> random_doubles(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform_real() * 2.0 - 1.0;
    return v;
}

}  // namespace

TEST_CASE("element-wise kernels are bit-identical across backends") {
    if (!kernels::force_backend(kernels::Backend::Avx2)) {
        MESSAGE("AVX2 unavailable; skipping equivalence checks");
        return;
    }
    Rng rng(7);
    // Sizes straddling the vector width, including remainders.
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 31u, 768u, 1001u}) {
        const auto vf = random_floats(rng, n);
        const auto a = random_doubles(rng, n);
        const auto b = random_doubles(rng, n);

        std::vector<double> acc_simd(a), acc_ref(a);
        kernels::detail::accumulate_avx2(acc_simd, vf);
        kernels::detail::accumulate_scalar(acc_ref, vf);
        CHECK(acc_simd == acc_ref);

        std::vector<double> out_simd(n), out_ref(n);
        kernels::detail::add_avx2(a, b, out_simd);
        kernels::detail::add_scalar(a, b, out_ref);
        CHECK(out_simd == out_ref);

        std::vector<double> s_simd(a), s_ref(a);
        kernels::detail::scale_avx2(s_simd, 0.37);
        kernels::detail::scale_scalar(s_ref, 0.37);
        CHECK(s_simd == s_ref);
    }
    kernels::force_backend(kernels::Backend::Scalar);
}

TEST_CASE("dot products agree across backends within accumulation slack") {
    if (!kernels::force_backend(kernels::Backend::Avx2)) return;
    Rng rng(11);
    for (std::size_t n : {1u, 8u, 9u, 768u, 4097u}) {
        const auto a = random_floats(rng, n);
        const auto b = random_floats(rng, n);
        const double simd = kernels::detail::dot_avx2(a, b);
        const double ref = kernels::detail::dot_scalar(a, b);
        CHECK(std::abs(simd - ref) < 1e-10);
    }
    kernels::force_backend(kernels::Backend::Scalar);
}

TEST_CASE("pairwise mean is independent of the backend") {
    Rng rng(13);
    std::vector<std::vector<float>> rows;
    for (int k = 0; k < 7; ++k) rows.push_back(random_floats(rng, 33));
    std::vector<std::span<const float>> views(rows.begin(), rows.end());

    REQUIRE(kernels::force_backend(kernels::Backend::Scalar));
    const auto scalar = kernels::pairwise_mean(views);
    if (kernels::force_backend(kernels::Backend::Avx2)) {
        const auto simd = kernels::pairwise_mean(views);
        CHECK(simd == scalar);
        kernels::force_backend(kernels::Backend::Scalar);
    }
    // Against a plain reference mean.
    for (std::size_t i = 0; i < scalar.size(); ++i) {
        double s = 0.0;
        for (const auto& r : rows) s += r[i];
        CHECK(scalar[i] == doctest::Approx(s / 7.0).epsilon(1e-12));
    }
}

TEST_CASE("pairwise mean matches the exact mean on powers of two") {
    // With 4 equal vectors the pairwise tree is exact.
    std::vector<std::vector<float>> rows(4, std::vector<float>{1.5f, -2.25f});
    std::vector<std::span<const float>> views(rows.begin(), rows.end());
    const auto mean = kernels::pairwise_mean(views);
    CHECK(mean[0] == 1.5);
    CHECK(mean[1] == -2.25);
}

TEST_CASE("cosine basics") {
    std::vector<float> a{1.0f, 0.0f};
    std::vector<float> b{0.0f, 2.0f};
    CHECK(kernels::cosine(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernels::cosine(a, b) == doctest::Approx(0.0).epsilon(1e-15));
    std::vector<float> zero{0.0f, 0.0f};
    CHECK_THROWS_AS((void)kernels::cosine(a, zero), std::invalid_argument);
}

TEST_CASE("ragged pairwise input is rejected") {
    std::vector<std::vector<float>> rows{{1.0f, 2.0f}, {1.0f}};
    std::vector<std::span<const float>> views(rows.begin(), rows.end());
    CHECK_THROWS_AS((void)kernels::pairwise_sum(views), std::invalid_argument);
}

TEST_CASE("empty input sums to the empty vector") {
    std::vector<std::span<const float>> none;
    CHECK(kernels::pairwise_sum(none).empty());
    CHECK(kernels::pairwise_mean(none).empty());
}
