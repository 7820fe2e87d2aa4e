#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nre {

/// Dense coordinates in the ground-truth latent space shared by users,
/// creators and news.
class LatentVector {
public:
    LatentVector() = default;
    explicit LatentVector(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
    explicit LatentVector(std::vector<double> values) : values_(std::move(values)) {}
    LatentVector(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    std::span<double> span() noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    operator std::span<const double>() const noexcept { return values_; }

    const std::vector<double>& values() const noexcept { return values_; }

    bool all_finite() const noexcept;

    LatentVector& operator+=(const LatentVector& other);
    LatentVector& operator-=(const LatentVector& other);
    LatentVector& operator*=(double scale) noexcept;

    friend bool operator==(const LatentVector&, const LatentVector&) = default;

private:
    std::vector<double> values_;
};

LatentVector operator+(LatentVector a, const LatentVector& b);
LatentVector operator-(LatentVector a, const LatentVector& b);
LatentVector operator*(LatentVector a, double scale);

/// Unweighted coordinate-wise mean; throws DegenerateInputError on an empty set.
LatentVector mean_of(std::span<const LatentVector> vectors);

}  // namespace nre
