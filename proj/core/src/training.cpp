#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/error.hpp"
#include "nre/recsys/training.hpp"

namespace nre::recsys {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ValidationError("learning_rate", "must be positive");
    if (batch_size == 0) throw ValidationError("batch_size", "must be positive");
    if (max_epochs == 0) throw ValidationError("max_epochs", "must be positive");
    if (patience == 0) throw ValidationError("patience", "must be at least 1");
    if (negative_ratio == 0) throw ValidationError("negative_ratio", "must be positive");
    if (embed_dim == 0) throw ValidationError("embed_dim", "must be positive");
    if (l2 < 0.0) throw ValidationError("l2", "must be non-negative");
    if (mrr_candidates < 1) throw ValidationError("mrr_candidates", "must be at least 1");
    if (split.train < 0.0 || split.validation < 0.0 || split.test < 0.0) {
        throw ValidationError("split_train", "split fractions must be non-negative");
    }
    if (std::abs(split.train + split.validation + split.test - 1.0) > 1e-9) {
        throw ValidationError("split_train", "split fractions must sum to 1");
    }
    if (split.train <= 0.0) throw ValidationError("split_train", "training fraction must be positive");
}

namespace {

// Never-liked active news for one user, either implicitly (rejection sampling
// against the liked list) or as an explicit list when most news are liked.
class NegativePool {
public:
    NegativePool(std::span<const NewsId> active, const std::vector<NewsId>& liked) : active_(active), liked_(liked) {
        std::size_t overlap = 0;
        auto a = active.begin();
        auto l = liked.begin();
        while (a != active.end() && l != liked.end()) {
            if (*a < *l) {
                ++a;
            } else if (*l < *a) {
                ++l;
            } else {
                ++overlap;
                ++a;
                ++l;
            }
        }
        available_ = active.size() - overlap;
        if (available_ > 0 && available_ * 4 < active.size()) {
            for (NewsId n : active) {
                if (!std::binary_search(liked.begin(), liked.end(), n)) explicit_.push_back(n);
            }
        }
    }

    std::size_t available() const noexcept { return available_; }

    NewsId draw(RngStream& rng) const {
        if (!explicit_.empty()) return explicit_[rng.uniform_index(explicit_.size())];
        while (true) {
            const NewsId n = active_[rng.uniform_index(active_.size())];
            if (!std::binary_search(liked_.begin(), liked_.end(), n)) return n;
        }
    }

    std::vector<NewsId> draw_distinct(std::size_t count, RngStream& rng) const {
        count = std::min(count, available_);
        std::vector<NewsId> out;
        if (count == 0) return out;
        if (!explicit_.empty() || count * 2 > available_) {
            std::vector<NewsId> all = explicit_;
            if (all.empty()) {
                for (NewsId n : active_) {
                    if (!std::binary_search(liked_.begin(), liked_.end(), n)) all.push_back(n);
                }
            }
            for (std::size_t idx : sample_without_replacement(all.size(), count, rng)) out.push_back(all[idx]);
            return out;
        }
        std::vector<NewsId> seen;
        while (out.size() < count) {
            const NewsId n = draw(rng);
            const auto it = std::lower_bound(seen.begin(), seen.end(), n);
            if (it != seen.end() && *it == n) continue;
            seen.insert(it, n);
            out.push_back(n);
        }
        return out;
    }

private:
    std::span<const NewsId> active_;
    const std::vector<NewsId>& liked_;
    std::size_t available_ = 0;
    std::vector<NewsId> explicit_;
};

std::size_t rounded_share(std::size_t n, double fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));
}

template <typename Id>
std::optional<std::size_t> index_of(const std::vector<Id>& sorted, Id id) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
    if (it == sorted.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

TrainingData build_training_set(std::span<const LikeEvent> likes, std::span<const NewsId> active_news,
                                std::span<const std::vector<NewsId>> liked_by_user, const TrainingSetOptions& options,
                                RngStream& rng) {
    TrainingData data;
    data.active_news.assign(active_news.begin(), active_news.end());
    if (!std::is_sorted(data.active_news.begin(), data.active_news.end())) {
        throw FormatError("active news list must be sorted");
    }

    std::vector<LikeEvent> positives;
    for (const auto& ev : likes) {
        if (std::binary_search(data.active_news.begin(), data.active_news.end(), ev.news)) positives.push_back(ev);
    }
    if (positives.empty()) return data;

    std::unordered_map<UserId, NegativePool> pools;
    std::vector<LikeEvent> kept;
    kept.reserve(positives.size());
    for (const auto& ev : positives) {
        if (ev.user >= liked_by_user.size()) throw FormatError("like event references an unknown user");
        auto it = pools.find(ev.user);
        if (it == pools.end()) it = pools.emplace(ev.user, NegativePool(data.active_news, liked_by_user[ev.user])).first;
        if (it->second.available() == 0) continue;
        kept.push_back(ev);
    }
    for (const auto& [user, pool] : pools) {
        if (pool.available() == 0) data.excluded_users.push_back(user);
    }
    std::sort(data.excluded_users.begin(), data.excluded_users.end());

    RngStream split_rng = rng.derive("split");
    shuffle_in_place(kept, split_rng);
    const std::size_t n = kept.size();
    const std::size_t n_train = std::min(n, std::max<std::size_t>(1, rounded_share(n, options.split.train)));
    const std::size_t n_valid = std::min(n - n_train, rounded_share(n, options.split.validation));

    RngStream neg_rng = rng.derive("negatives");
    const std::size_t probe_size = options.mrr_candidates > 0 ? options.mrr_candidates - 1 : 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& ev = kept[k];
        const auto& pool = pools.at(ev.user);
        PositiveEvent pe{ev.user, ev.news, {}};
        if (k < n_train) {
            pe.negatives.reserve(options.negative_ratio);
            for (std::size_t r = 0; r < options.negative_ratio; ++r) pe.negatives.push_back(pool.draw(neg_rng));
            data.train.push_back(std::move(pe));
        } else {
            pe.negatives = pool.draw_distinct(probe_size, neg_rng);
            (k < n_train + n_valid ? data.validation : data.test).push_back(std::move(pe));
        }
    }
    return data;
}

RankingModel::RankingModel(std::vector<UserId> users, std::vector<NewsId> news, std::size_t dim)
    : dim_(dim), users_(std::move(users)), news_(std::move(news)), user_emb_(users_.size(), dim),
      news_emb_(news_.size(), dim) {
    std::sort(users_.begin(), users_.end());
    std::sort(news_.begin(), news_.end());
}

void RankingModel::set_coverage(std::vector<UserId> users, std::vector<NewsId> news) {
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    std::sort(news.begin(), news.end());
    news.erase(std::unique(news.begin(), news.end()), news.end());
    covered_users_ = std::move(users);
    covered_news_ = std::move(news);
}

bool RankingModel::covers_user(UserId u) const {
    return std::binary_search(covered_users_.begin(), covered_users_.end(), u);
}

std::optional<std::size_t> RankingModel::user_row(UserId u) const { return index_of(users_, u); }
std::optional<std::size_t> RankingModel::news_row(NewsId n) const { return index_of(news_, n); }

double RankingModel::score_rows(std::size_t user_row, std::size_t news_row) const {
    return dot(user_emb_.row(user_row), news_emb_.row(news_row));
}

double RankingModel::score(UserId u, NewsId n) const {
    const auto ur = user_row(u);
    const auto nr = news_row(n);
    if (!ur || !nr) throw Error("ranking model has no embedding for the requested pair");
    return score_rows(*ur, *nr);
}

double pairwise_loss(const RankingModel& model, std::span<const PairRows> batch, double l2) {
    if (batch.empty()) return 0.0;
    const auto& U = model.user_embeddings();
    const auto& N = model.news_embeddings();
    double total = 0.0;
    for (const auto& p : batch) {
        const auto u = U.row(p.user);
        const auto i = N.row(p.positive);
        const auto j = N.row(p.negative);
        const double diff = dot(u, i) - dot(u, j);
        total += -log_sigmoid(diff) + l2 * (squared_norm(u) + squared_norm(i) + squared_norm(j));
    }
    return total / static_cast<double>(batch.size());
}

void pairwise_loss_gradient(const RankingModel& model, std::span<const PairRows> batch, double l2,
                            DenseMatrix& user_grad, DenseMatrix& news_grad) {
    if (batch.empty()) return;
    const auto& U = model.user_embeddings();
    const auto& N = model.news_embeddings();
    const double inv = 1.0 / static_cast<double>(batch.size());
    const std::size_t d = model.dimension();
    for (const auto& p : batch) {
        const auto u = U.row(p.user);
        const auto i = N.row(p.positive);
        const auto j = N.row(p.negative);
        const double diff = dot(u, i) - dot(u, j);
        // d/dx [-ln sigma(x)] = -sigma(-x)
        const double g = -sigmoid(-diff) * inv;
        const double r = 2.0 * l2 * inv;
        auto gu = user_grad.row(p.user);
        auto gi = news_grad.row(p.positive);
        auto gj = news_grad.row(p.negative);
        for (std::size_t k = 0; k < d; ++k) {
            gu[k] += g * (i[k] - j[k]) + r * u[k];
            gi[k] += g * u[k] + r * i[k];
            gj[k] += -g * u[k] + r * j[k];
        }
    }
}

std::size_t rank_of_positive(const RankingModel& model, const PositiveEvent& event) {
    const auto ur = model.user_row(event.user);
    const auto pr = model.news_row(event.positive);
    if (!ur || !pr) return event.negatives.size() + 1;
    const double target = model.score_rows(*ur, *pr);
    std::size_t rank = 1;
    for (NewsId c : event.negatives) {
        const auto cr = model.news_row(c);
        if (!cr) continue;
        const double s = model.score_rows(*ur, *cr);
        if (s > target || (s == target && c < event.positive)) ++rank;
    }
    return rank;
}

double evaluate_mrr_at_5(const RankingModel& model, std::span<const PositiveEvent> events) {
    if (events.empty()) return 0.0;
    double total = 0.0;
    for (const auto& ev : events) {
        const std::size_t rank = rank_of_positive(model, ev);
        if (rank <= 5) total += 1.0 / static_cast<double>(rank);
    }
    return total / static_cast<double>(events.size());
}

TrainResult train_ranking_model(const TrainingData& data, const TrainConfig& config, RngStream& rng) {
    if (data.train.empty()) throw DegenerateInputError("training split is empty");

    std::vector<UserId> users;
    for (const auto* split : {&data.train, &data.validation, &data.test}) {
        for (const auto& ev : *split) users.push_back(ev.user);
    }
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());

    TrainResult result;
    RankingModel model(users, data.active_news, config.embed_dim);
    {
        std::vector<UserId> cu;
        std::vector<NewsId> cn;
        for (const auto& ev : data.train) {
            cu.push_back(ev.user);
            cn.push_back(ev.positive);
        }
        model.set_coverage(std::move(cu), std::move(cn));
    }
    RngStream init_rng = rng.derive("init");
    for (double& v : model.user_embeddings().flat()) v = config.init_std * init_rng.normal();
    for (double& v : model.news_embeddings().flat()) v = config.init_std * init_rng.normal();

    std::vector<PairRows> pairs;
    pairs.reserve(data.train.size() * config.negative_ratio);
    for (const auto& ev : data.train) {
        const std::size_t ur = *model.user_row(ev.user);
        const auto pr = model.news_row(ev.positive);
        if (!pr) throw FormatError("training positive is not an active news");
        for (NewsId neg : ev.negatives) pairs.push_back({ur, *pr, *model.news_row(neg)});
    }

    const std::span<const PositiveEvent> selection =
        data.validation.empty() ? std::span<const PositiveEvent>(data.train) : std::span<const PositiveEvent>(data.validation);

    const AdamOptimizer::Options adam{config.learning_rate, config.beta1, config.beta2, config.adam_epsilon};
    AdamOptimizer user_opt(model.user_embeddings().flat().size(), adam);
    AdamOptimizer news_opt(model.news_embeddings().flat().size(), adam);
    DenseMatrix user_grad(model.user_embeddings().rows(), model.dimension());
    DenseMatrix news_grad(model.news_embeddings().rows(), model.dimension());

    double best = evaluate_mrr_at_5(model, selection);
    result.validation_mrr.push_back(best);
    RankingModel best_model = model;
    std::size_t since_best = 0;
    RngStream order_rng = rng.derive("order");

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        shuffle_in_place(pairs, order_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < pairs.size(); start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, pairs.size() - start);
            const std::span<const PairRows> batch(pairs.data() + start, len);
            std::fill(user_grad.flat().begin(), user_grad.flat().end(), 0.0);
            std::fill(news_grad.flat().begin(), news_grad.flat().end(), 0.0);
            const double loss = pairwise_loss(model, batch, config.l2);
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "ranking model loss became non-finite at epoch " << epoch << ", batch offset " << start
                    << " (" << pairs.size() << " pairs, lr " << config.learning_rate << ")";
                throw Error(msg.str());
            }
            epoch_loss += loss * static_cast<double>(len);
            pairwise_loss_gradient(model, batch, config.l2, user_grad, news_grad);
            user_opt.step(model.user_embeddings().flat(), user_grad.flat());
            news_opt.step(model.news_embeddings().flat(), news_grad.flat());
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(pairs.size()));
        result.epochs_run = epoch;

        const double mrr = evaluate_mrr_at_5(model, selection);
        result.validation_mrr.push_back(mrr);
        if (mrr > best) {
            best = mrr;
            best_model = model;
            result.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= config.patience) {
            break;
        }
    }
    result.model = std::move(best_model);
    if (!data.test.empty()) result.test_mrr = evaluate_mrr_at_5(result.model, data.test);
    return result;
}

}  // namespace nre::recsys
