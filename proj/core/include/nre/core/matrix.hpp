#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nre {

/// Row-major dense matrix used for embedding tables.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> flat() noexcept { return data_; }
    std::span<const double> flat() const noexcept { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Adaptive-moment optimizer state for one flat parameter block (descent).
class AdamOptimizer {
public:
    struct Options {
        double learning_rate = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
    };

    AdamOptimizer(std::size_t parameter_count, Options options)
        : options_(options), first_(parameter_count, 0.0), second_(parameter_count, 0.0) {}

    /// params -= lr * mhat / (sqrt(vhat) + eps)
    void step(std::span<double> params, std::span<const double> gradient);

    std::size_t steps() const noexcept { return steps_; }

private:
    Options options_;
    std::vector<double> first_;
    std::vector<double> second_;
    std::size_t steps_ = 0;
};

}  // namespace nre
