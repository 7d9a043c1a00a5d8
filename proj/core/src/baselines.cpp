#include "tagrank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tagrank/errors.hpp"

namespace tagrank {

CooccurrenceStats CooccurrenceStats::from_corpus(const Corpus& corpus) {
    CooccurrenceStats stats;
    const std::size_t tag_count = corpus.tag_count();
    stats.tag_post_counts_.assign(tag_count, 0);
    std::unordered_map<std::uint64_t, std::uint32_t> pairs;
    for (const Post& post : corpus.posts) {
        std::vector<TagId> tags(post.tags);
        std::sort(tags.begin(), tags.end());
        for (std::size_t a = 0; a < tags.size(); ++a) {
            ++stats.tag_post_counts_[tags[a]];
            for (std::size_t b = a + 1; b < tags.size(); ++b) {
                ++pairs[(static_cast<std::uint64_t>(tags[a]) << 32) | tags[b]];
            }
        }
    }
    stats.neighbors_.resize(tag_count);
    for (const auto& [key, count] : pairs) {
        auto lo = static_cast<TagId>(key >> 32);
        auto hi = static_cast<TagId>(key & 0xffffffffULL);
        stats.neighbors_[lo].push_back({hi, count});
        stats.neighbors_[hi].push_back({lo, count});
    }
    for (auto& list : stats.neighbors_) {
        std::sort(list.begin(), list.end());
    }
    return stats;
}

std::uint32_t CooccurrenceStats::post_count(TagId tag) const {
    return tag < tag_post_counts_.size() ? tag_post_counts_[tag] : 0;
}

std::uint32_t CooccurrenceStats::pair_count(TagId a, TagId b) const {
    if (a >= neighbors_.size() || b >= neighbors_.size()) {
        return 0;
    }
    if (a == b) {
        return post_count(a);
    }
    const auto& list = neighbors_[a];
    auto it = std::lower_bound(list.begin(), list.end(), std::pair<TagId, std::uint32_t>{b, 0},
                               [](const auto& x, const auto& y) { return x.first < y.first; });
    return (it != list.end() && it->first == b) ? it->second : 0;
}

double CooccurrenceStats::conditional(TagId candidate, TagId given) const {
    std::uint32_t given_count = post_count(given);
    if (given_count == 0) {
        return 0.0;
    }
    return static_cast<double>(pair_count(given, candidate)) / static_cast<double>(given_count);
}

std::span<const std::pair<TagId, std::uint32_t>> CooccurrenceStats::neighbors(TagId tag) const {
    if (tag >= neighbors_.size()) {
        return {};
    }
    return neighbors_[tag];
}

namespace {

ScoredTagList take_top(std::vector<ScoredTag> scored, std::size_t n) {
    std::sort(scored.begin(), scored.end(), [](const ScoredTag& a, const ScoredTag& b) {
        return a.score != b.score ? a.score > b.score : a.tag < b.tag;
    });
    if (scored.size() > n) {
        scored.resize(n);
    }
    return scored;
}

} // namespace

BaselineRecommendation tagcoor_recommend(const CooccurrenceStats& stats,
                                         std::span<const TagId> seed_tags, std::size_t n) {
    if (seed_tags.empty()) {
        throw ConfigError("tagcoor: seed tag set must be non-empty");
    }
    std::set<TagId> seed(seed_tags.begin(), seed_tags.end());
    BaselineRecommendation out;
    std::vector<TagId> usable;
    for (TagId s : seed) {
        if (stats.post_count(s) > 0) {
            usable.push_back(s);
        } else {
            out.skipped_seeds.push_back(s);
        }
    }
    if (usable.empty()) {
        throw DataError("tagcoor: no seed tag appears in the co-occurrence statistics");
    }

    std::map<TagId, double> scores;
    for (TagId s : usable) {
        const double denom = static_cast<double>(stats.post_count(s));
        for (const auto& [tag, count] : stats.neighbors(s)) {
            if (!seed.contains(tag)) {
                scores[tag] += static_cast<double>(count) / denom;
            }
        }
    }
    std::vector<ScoredTag> scored;
    scored.reserve(scores.size());
    for (const auto& [tag, score] : scores) {
        scored.push_back({tag, score});
    }
    out.items = take_top(std::move(scored), n);
    return out;
}

CandidateMultiset cf_candidates(const Corpus& corpus, std::span<const TagId> seed_tags,
                                std::size_t m_neighbors) {
    if (seed_tags.empty()) {
        throw ConfigError("cf: seed tag set must be non-empty");
    }
    if (m_neighbors < 1) {
        throw ConfigError("cf: neighborhood size must be at least 1");
    }
    std::set<TagId> seed(seed_tags.begin(), seed_tags.end());
    const double seed_norm = std::sqrt(static_cast<double>(seed.size()));

    struct Neighbor {
        std::size_t post = 0;
        double similarity = 0.0;
    };
    std::vector<Neighbor> neighbors;
    for (std::size_t d = 0; d < corpus.posts.size(); ++d) {
        const Post& post = corpus.posts[d];
        std::size_t shared = 0;
        for (TagId t : post.tags) {
            shared += seed.contains(t) ? 1 : 0;
        }
        if (shared == 0) {
            continue;
        }
        double sim = static_cast<double>(shared) /
                     (seed_norm * std::sqrt(static_cast<double>(post.tags.size())));
        neighbors.push_back({d, sim});
    }
    std::sort(neighbors.begin(), neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.similarity != b.similarity ? a.similarity > b.similarity : a.post < b.post;
    });
    if (neighbors.size() > m_neighbors) {
        neighbors.resize(m_neighbors);
    }

    CandidateMultiset candidates;
    for (const Neighbor& nb : neighbors) {
        for (TagId t : corpus.posts[nb.post].tags) {
            if (!seed.contains(t)) {
                ++candidates[t];
            }
        }
    }
    return candidates;
}

ScoredTagList cf_frequency_rank(const CandidateMultiset& candidates, std::size_t n) {
    std::vector<ScoredTag> scored;
    scored.reserve(candidates.size());
    for (const auto& [tag, count] : candidates) {
        scored.push_back({tag, static_cast<double>(count)});
    }
    return take_top(std::move(scored), n);
}

std::vector<double> train_tag_weights(const Corpus& corpus, double lambda) {
    if (corpus.post_count() < 2) {
        throw ConfigError("tag-weight training needs at least two posts");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("ridge lambda must be positive and finite");
    }
    const std::size_t tag_count = corpus.tag_count();
    const std::size_t post_count = corpus.post_count();

    // Normal equations (X^T X + lambda I) w = X^T y with binary X applied
    // implicitly through the posts; no T x T matrix is formed.
    std::vector<double> b(tag_count, 0.0);
    for (std::size_t d = 0; d < post_count; ++d) {
        const double y = std::log1p(static_cast<double>(corpus.posts[d].views));
        for (TagId t : corpus.posts[d].tags) {
            b[t] += y;
        }
    }

    auto matvec = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t t = 0; t < tag_count; ++t) {
            out[t] = lambda * v[t];
        }
        for (std::size_t d = 0; d < post_count; ++d) {
            double dot = 0.0;
            for (TagId t : corpus.posts[d].tags) {
                dot += v[t];
            }
            if (dot != 0.0) {
                for (TagId t : corpus.posts[d].tags) {
                    out[t] += dot;
                }
            }
        }
    };
    auto dot = [tag_count](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < tag_count; ++i) {
            s += a[i] * c[i];
        }
        return s;
    };

    std::vector<double> x(tag_count, 0.0);
    std::vector<double> r(b);
    std::vector<double> p(b);
    std::vector<double> ap(tag_count, 0.0);
    double rho = dot(r, r);
    if (rho == 0.0) {
        return x;
    }
    const double threshold = rho * 1e-26; // squared relative residual 1e-13
    const std::size_t max_rounds = std::max<std::size_t>(2 * tag_count, 256);
    for (std::size_t round = 0; round < max_rounds; ++round) {
        matvec(p, ap);
        const double denom = dot(p, ap);
        if (denom <= 0.0) {
            break;
        }
        const double step = rho / denom;
        for (std::size_t i = 0; i < tag_count; ++i) {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        const double rho_next = dot(r, r);
        if (rho_next <= threshold) {
            break;
        }
        const double ratio = rho_next / rho;
        for (std::size_t i = 0; i < tag_count; ++i) {
            p[i] = r[i] + ratio * p[i];
        }
        rho = rho_next;
    }
    return x;
}

ScoredTagList cf_dfw_rank(const CandidateMultiset& candidates, std::span<const double> weights,
                          std::size_t n) {
    std::vector<ScoredTag> scored;
    scored.reserve(candidates.size());
    for (const auto& [tag, count] : candidates) {
        const double w = tag < weights.size() ? weights[tag] : 0.0;
        scored.push_back({tag, static_cast<double>(count) * w});
    }
    return take_top(std::move(scored), n);
}

} // namespace tagrank
