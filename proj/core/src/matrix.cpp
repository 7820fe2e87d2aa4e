#include "nre/core/matrix.hpp"

#include <cmath>

#include "nre/error.hpp"

namespace nre {

void AdamOptimizer::step(std::span<double> params, std::span<const double> gradient) {
    if (params.size() != first_.size() || gradient.size() != first_.size()) {
        throw FormatError("adam: parameter block size changed");
    }
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double correction1 = 1.0 - std::pow(options_.beta1, t);
    const double correction2 = 1.0 - std::pow(options_.beta2, t);
    const double step_size = options_.learning_rate / correction1;
    const double sqrt_c2 = std::sqrt(correction2);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = gradient[i];
        first_[i] = options_.beta1 * first_[i] + (1.0 - options_.beta1) * g;
        second_[i] = options_.beta2 * second_[i] + (1.0 - options_.beta2) * g * g;
        params[i] -= step_size * first_[i] / (std::sqrt(second_[i]) / sqrt_c2 + options_.epsilon);
    }
}

}  // namespace nre
