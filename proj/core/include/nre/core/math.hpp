#pragma once

#include <span>
#include <vector>

namespace nre {

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

/// Standard cosine similarity dot(a,b) / (|a| |b|).
/// Throws DegenerateInputError when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// Cosine with caller-supplied norms, for hot loops that cache them.
inline double cosine_with_norms(std::span<const double> a, double norm_a,
                                std::span<const double> b, double norm_b) {
    return dot(a, b) / (norm_a * norm_b);
}

/// Max-subtracted softmax. Throws DegenerateInputError on empty input.
std::vector<double> softmax(std::span<const double> values);

double log_sum_exp(std::span<const double> values);

double sigmoid(double x) noexcept;

/// ln(sigmoid(x)) evaluated without overflow for large |x|.
double log_sigmoid(double x) noexcept;

}  // namespace nre
