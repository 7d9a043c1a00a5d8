#include "tagrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tagrank/errors.hpp"
#include "tagrank/util.hpp"

namespace tagrank {

PreferenceVector uniform_preference(std::size_t tag_count, double mass) {
    if (tag_count == 0) {
        throw ConfigError("uniform preference needs at least one tag");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ConfigError("preference mass must be positive and finite");
    }
    PreferenceVector p;
    p.values.assign(tag_count, mass / static_cast<double>(tag_count));
    p.mass = mass;
    return p;
}

PreferenceVector indicator_preference(std::span<const TagId> tags, std::size_t tag_count) {
    if (tags.empty()) {
        throw ConfigError("indicator preference needs a non-empty tag set");
    }
    PreferenceVector p;
    p.values.assign(tag_count, 0.0);
    for (TagId t : tags) {
        if (t >= tag_count) {
            throw ConfigError("indicator preference: tag index " + std::to_string(t) +
                              " out of range");
        }
        p.values[t] = 1.0;
    }
    p.mass = kahan_sum(p.values);
    return p;
}

namespace {

void check_config(const IterationConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    if (cfg.max_iterations < 1) {
        throw ConfigError("max_iterations must be at least 1");
    }
    if (!(cfg.tolerance > 0.0)) {
        throw ConfigError("tolerance must be positive");
    }
}

} // namespace

PowerIterationResult power_iterate(const AdjacencyMatrix& a, const PreferenceVector& p,
                                   const IterationConfig& cfg, const IterationObserver& observer) {
    check_config(cfg);
    const std::size_t tag_count = a.matrix.rows();
    if (a.matrix.cols() != tag_count) {
        throw DataError("power iteration requires a square adjacency matrix");
    }
    if (p.values.size() != tag_count) {
        throw DataError("preference vector length does not match tag count");
    }
    if (!(p.mass > 0.0) || !std::isfinite(p.mass)) {
        throw ConfigError("preference mass must be positive");
    }

    PowerIterationResult result;
    result.scores.assign(tag_count, p.mass / static_cast<double>(tag_count));
    std::vector<double> next(tag_count, 0.0);

    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        apply_transposed(a.matrix, result.scores, next);
        for (std::size_t j = 0; j < tag_count; ++j) {
            next[j] = cfg.alpha * next[j] + (1.0 - cfg.alpha) * p.values[j];
        }
        // Rescale to the preference mass; this restores what dangling rows
        // swallowed during propagation.
        double sum = kahan_sum(next);
        if (!std::isfinite(sum) || sum <= 0.0) {
            throw NumericError("power iteration produced a non-finite score sum");
        }
        const double scale = p.mass / sum;
        double delta = 0.0;
        for (std::size_t j = 0; j < tag_count; ++j) {
            next[j] *= scale;
            delta += std::abs(next[j] - result.scores[j]);
        }
        if (!std::isfinite(delta)) {
            throw NumericError("power iteration diverged");
        }
        result.scores.swap(next);
        result.iterations = iter;
        result.last_delta = delta;
        if (observer) {
            observer(IterationStats{iter, delta, kahan_sum(result.scores)});
        }
        if (delta < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

Recommender::Recommender(const AdjacencyMatrix& a, IterationConfig cfg)
    : adjacency_(a), cfg_(cfg) {
    check_config(cfg_);
}

const std::vector<double>& Recommender::unit_baseline() const {
    if (!unit_baseline_) {
        auto uniform = uniform_preference(adjacency_.matrix.rows(), 1.0);
        unit_baseline_ = power_iterate(adjacency_, uniform, cfg_).scores;
    }
    return *unit_baseline_;
}

Recommendation Recommender::recommend(std::span<const TagId> seed_tags, std::size_t n) const {
    if (n < 1) {
        throw ConfigError("recommendation count must be at least 1");
    }
    const std::size_t tag_count = adjacency_.matrix.rows();
    std::set<TagId> seed(seed_tags.begin(), seed_tags.end());
    std::vector<TagId> seed_list(seed.begin(), seed.end());

    auto seeded = power_iterate(adjacency_, indicator_preference(seed_list, tag_count), cfg_);
    const double mass = static_cast<double>(seed_list.size());
    const std::vector<double>& baseline = unit_baseline();

    // Tags whose score difference is within the iteration tolerance of zero
    // have no measurable connection to the seed and never qualify.
    ScoredTagList candidates;
    for (std::size_t t = 0; t < tag_count; ++t) {
        if (seed.contains(static_cast<TagId>(t))) {
            continue;
        }
        double w = seeded.scores[t] - mass * baseline[t];
        if (w > cfg_.tolerance) {
            candidates.push_back({static_cast<TagId>(t), w});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const ScoredTag& a, const ScoredTag& b) {
        return a.score != b.score ? a.score > b.score : a.tag < b.tag;
    });

    Recommendation rec;
    if (candidates.size() > n) {
        candidates.resize(n);
    }
    rec.shortfall = candidates.size() < n;
    rec.items = std::move(candidates);
    return rec;
}

ScoredTagList Recommender::rank_all() const {
    const std::vector<double>& baseline = unit_baseline();
    ScoredTagList ranking;
    ranking.reserve(baseline.size());
    for (std::size_t t = 0; t < baseline.size(); ++t) {
        ranking.push_back({static_cast<TagId>(t), baseline[t]});
    }
    std::sort(ranking.begin(), ranking.end(), [](const ScoredTag& a, const ScoredTag& b) {
        return a.score != b.score ? a.score > b.score : a.tag < b.tag;
    });
    return ranking;
}

Recommendation recommend(const AdjacencyMatrix& a, std::span<const TagId> seed_tags,
                         std::size_t n, const IterationConfig& cfg) {
    return Recommender(a, cfg).recommend(seed_tags, n);
}

ScoredTagList rank_all(const AdjacencyMatrix& a, const IterationConfig& cfg) {
    return Recommender(a, cfg).rank_all();
}

} // namespace tagrank
