#include "nre/core/latent.hpp"

#include <cmath>

#include "nre/error.hpp"

namespace nre {

bool LatentVector::all_finite() const noexcept {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

LatentVector& LatentVector::operator+=(const LatentVector& other) {
    if (other.size() != size()) throw FormatError("latent dimension mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

LatentVector& LatentVector::operator-=(const LatentVector& other) {
    if (other.size() != size()) throw FormatError("latent dimension mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

LatentVector& LatentVector::operator*=(double scale) noexcept {
    for (double& v : values_) v *= scale;
    return *this;
}

LatentVector operator+(LatentVector a, const LatentVector& b) { return a += b; }
LatentVector operator-(LatentVector a, const LatentVector& b) { return a -= b; }
LatentVector operator*(LatentVector a, double scale) { return a *= scale; }

LatentVector mean_of(std::span<const LatentVector> vectors) {
    if (vectors.empty()) throw DegenerateInputError("mean of an empty vector set");
    LatentVector out(vectors.front().size());
    for (const auto& v : vectors) out += v;
    out *= 1.0 / static_cast<double>(vectors.size());
    return out;
}

}  // namespace nre
