#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nre/core/matrix.hpp"
#include "nre/core/rng.hpp"
#include "nre/ids.hpp"

namespace nre::recsys {

struct LikeEvent {
    UserId user = 0;
    NewsId news = 0;
    Round round = 0;

    friend bool operator==(const LikeEvent&, const LikeEvent&) = default;
};

struct SplitFractions {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

/// Hyper-parameters of the in-loop pairwise ranking model.
struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 1024;
    std::size_t max_epochs = 100;
    std::size_t patience = 3;
    std::size_t negative_ratio = 9;
    SplitFractions split;
    std::size_t embed_dim = 64;
    double l2 = 1e-4;
    std::size_t mrr_candidates = 100;
    double init_std = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// One LIKE with its sampled negatives. Training events carry
/// `negative_ratio` negatives (drawn with replacement); validation and test
/// events carry `mrr_candidates - 1` distinct never-liked candidates used for
/// ranking evaluation.
struct PositiveEvent {
    UserId user = 0;
    NewsId positive = 0;
    std::vector<NewsId> negatives;
};

struct TrainingData {
    std::vector<PositiveEvent> train;
    std::vector<PositiveEvent> validation;
    std::vector<PositiveEvent> test;
    std::vector<NewsId> active_news;     ///< sorted
    std::vector<UserId> excluded_users;  ///< liked every active news; no negatives exist

    bool cold() const noexcept { return train.empty(); }
    std::size_t positive_count() const noexcept { return train.size() + validation.size() + test.size(); }
};

struct TrainingSetOptions {
    std::size_t negative_ratio = 9;
    SplitFractions split;
    std::size_t mrr_candidates = 100;
};

/// Positives are the LIKEs on currently active news; negatives come uniformly
/// from active news the user never liked (`liked_by_user[u]` sorted). The
/// split is a random partition of positive events.
TrainingData build_training_set(std::span<const LikeEvent> likes, std::span<const NewsId> active_news,
                                std::span<const std::vector<NewsId>> liked_by_user, const TrainingSetOptions& options,
                                RngStream& rng);

/// Dot-product model in a learned embedding space (separate from the latent space).
class RankingModel {
public:
    RankingModel() = default;
    RankingModel(std::vector<UserId> users, std::vector<NewsId> news, std::size_t dim);

    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<UserId>& users() const noexcept { return users_; }
    const std::vector<NewsId>& news() const noexcept { return news_; }

    /// Ids with at least one positive in the training split (sorted).
    const std::vector<UserId>& covered_users() const noexcept { return covered_users_; }
    const std::vector<NewsId>& covered_news() const noexcept { return covered_news_; }
    void set_coverage(std::vector<UserId> users, std::vector<NewsId> news);
    bool covers_user(UserId u) const;

    std::optional<std::size_t> user_row(UserId u) const;
    std::optional<std::size_t> news_row(NewsId n) const;

    DenseMatrix& user_embeddings() noexcept { return user_emb_; }
    DenseMatrix& news_embeddings() noexcept { return news_emb_; }
    const DenseMatrix& user_embeddings() const noexcept { return user_emb_; }
    const DenseMatrix& news_embeddings() const noexcept { return news_emb_; }

    double score_rows(std::size_t user_row, std::size_t news_row) const;
    /// Throws Error when either id is unknown to the model.
    double score(UserId u, NewsId n) const;

    friend bool operator==(const RankingModel&, const RankingModel&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<UserId> users_;
    std::vector<NewsId> news_;
    std::vector<UserId> covered_users_;
    std::vector<NewsId> covered_news_;
    DenseMatrix user_emb_;
    DenseMatrix news_emb_;
};

/// Row-indexed (user, positive, negative) pair.
struct PairRows {
    std::size_t user = 0;
    std::size_t positive = 0;
    std::size_t negative = 0;
};

/// Mean over the batch of -ln sigma(s_ui - s_uj) + l2 * (|u|^2 + |i|^2 + |j|^2).
double pairwise_loss(const RankingModel& model, std::span<const PairRows> batch, double l2);

/// Gradient of pairwise_loss, accumulated into zero-initialised matrices
/// shaped like the model's embeddings.
void pairwise_loss_gradient(const RankingModel& model, std::span<const PairRows> batch, double l2,
                            DenseMatrix& user_grad, DenseMatrix& news_grad);

/// Rank of the positive among {positive} U negatives: descending score,
/// ties resolved towards the smaller news id. 1-based.
std::size_t rank_of_positive(const RankingModel& model, const PositiveEvent& event);

/// Mean of 1/rank over events, counting 0 for rank > 5. Events whose user
/// or news is unknown to the model contribute 0.
double evaluate_mrr_at_5(const RankingModel& model, std::span<const PositiveEvent> events);

struct TrainResult {
    RankingModel model;
    std::size_t best_epoch = 0;  ///< 0 = initial parameters
    std::size_t epochs_run = 0;
    std::vector<double> validation_mrr;  ///< index 0 = at initialisation
    std::optional<double> test_mrr;
    std::vector<double> epoch_loss;
};

/// Adaptive-moment descent on the pairwise loss with MRR@5 early stopping;
/// returns the parameters of the best validation epoch. When the validation
/// split is empty the training events are used for model selection.
/// Throws Error on a non-finite loss.
TrainResult train_ranking_model(const TrainingData& data, const TrainConfig& config, RngStream& rng);

}  // namespace nre::recsys
