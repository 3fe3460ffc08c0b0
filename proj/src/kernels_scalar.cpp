#include "bioprep/kernels.hpp"

namespace bioprep::kernels::detail {

void accumulate_scalar(std::span<double> acc, std::span<const float> v) {
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += static_cast<double>(v[i]);
}

void add_scalar(std::span<const double> a, std::span<const double> b,
                std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

void scale_scalar(std::span<double> v, double s) {
    for (double& x : v) x *= s;
}

double dot_scalar(std::span<const float> a, std::span<const float> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return s;
}

double dot_d_scalar(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace bioprep::kernels::detail
