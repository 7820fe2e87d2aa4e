#include "nre/datagen/bootstrap.hpp"

#include <cmath>
#include <numeric>

#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/error.hpp"

namespace nre::datagen {
namespace {

LatentVector random_direction(std::size_t dim, RngStream& rng) {
    LatentVector v(dim);
    double n = 0.0;
    while (n == 0.0) {
        for (double& x : v) x = rng.normal();
        n = norm(v);
    }
    v *= 1.0 / n;
    return v;
}

double distance(const LatentVector& a, const LatentVector& b) { return norm((a - b).span()); }

}  // namespace

BootstrapSpace bootstrap_latent_space(const BootstrapConfig& config, RngStream& rng) {
    if (config.topics == 0 || config.dimension == 0) throw DegenerateInputError("bootstrap needs topics and dimension");
    if (config.spread < 0.0 || config.component_std <= 0.0) throw DegenerateInputError("bootstrap scales out of range");

    RngStream mean_rng = rng.derive("means");
    std::vector<LatentVector> means;
    constexpr int kMaxAttempts = 10000;
    for (std::size_t t = 0; t < config.topics; ++t) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxAttempts) {
                throw DegenerateInputError("cannot place bootstrap topic means at the requested spread");
            }
            LatentVector candidate = random_direction(config.dimension, mean_rng) * config.spread;
            bool separated = true;
            for (const auto& m : means) separated = separated && distance(m, candidate) >= config.spread / 2.0;
            if (separated) {
                means.push_back(std::move(candidate));
                break;
            }
        }
    }

    std::vector<double> weights(config.topics);
    for (std::size_t t = 0; t < config.topics; ++t) weights[t] = std::pow(static_cast<double>(t + 1), -config.weight_skew);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= total;

    GmmModel model;
    model.weights = weights;
    model.means = means;
    const double variance = config.component_std * config.component_std;
    model.variances.assign(config.topics, LatentVector(config.dimension, variance));
    model.validate();

    BootstrapSpace space;
    space.users = model;
    space.creators = model;

    if (config.words_per_topic > 0) {
        RngStream word_rng = rng.derive("words");
        embeddings::EmbeddingTable table;
        for (std::size_t t = 0; t < config.topics; ++t) {
            const std::string topic = "topic" + std::to_string(t);
            // The topic centre itself; skipped when it is the zero vector.
            if (norm(means[t]) > 0.0) {
                table.add(topic, means[t]);
                space.wordbase_tokens.push_back(topic);
            }
            for (std::size_t w = 0; w < config.words_per_topic; ++w) {
                const std::string token = topic + "_w" + std::to_string(w);
                table.add(token, sample_gaussian_vector(means[t], config.component_std, word_rng));
                space.wordbase_tokens.push_back(token);
            }
        }
        space.word_table = std::move(table);
    }
    return space;
}

}  // namespace nre::datagen
