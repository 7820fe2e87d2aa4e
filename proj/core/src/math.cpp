#include "nre/core/math.hpp"

#include <algorithm>
#include <cmath>

#include "nre/error.hpp"

namespace nre {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw FormatError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw DegenerateInputError("cosine of a zero-norm vector");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<double> softmax(std::span<const double> values) {
    if (values.empty()) throw DegenerateInputError("softmax of an empty vector");
    const double peak = *std::max_element(values.begin(), values.end());
    std::vector<double> out(values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::exp(values[i] - peak);
        total += out[i];
    }
    for (double& p : out) p /= total;
    return out;
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) return -INFINITY;
    const double peak = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(peak)) return peak;
    double total = 0.0;
    for (double v : values) total += std::exp(v - peak);
    return peak + std::log(total);
}

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_sigmoid(double x) noexcept {
    // ln sigma(x) = -ln(1 + e^{-x}) = min(x, 0) - ln(1 + e^{-|x|})
    return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x)));
}

}  // namespace nre
