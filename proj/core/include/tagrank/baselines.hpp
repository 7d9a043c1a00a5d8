#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tagrank/corpus.hpp"
#include "tagrank/types.hpp"

namespace tagrank {

/// Per-tag post counts |t_i| and symmetric pair counts |t_i ∩ t_j| (posts
/// carrying both tags), stored as sorted per-tag neighbor lists.
class CooccurrenceStats {
public:
    static CooccurrenceStats from_corpus(const Corpus& corpus);

    std::size_t tag_count() const { return tag_post_counts_.size(); }
    std::uint32_t post_count(TagId tag) const;
    std::uint32_t pair_count(TagId a, TagId b) const;

    /// P(candidate | given) = |t_given ∩ t_candidate| / |t_given|; 0 when the
    /// given tag occurs on no post.
    double conditional(TagId candidate, TagId given) const;

    std::span<const std::pair<TagId, std::uint32_t>> neighbors(TagId tag) const;

private:
    std::vector<std::uint32_t> tag_post_counts_;
    std::vector<std::vector<std::pair<TagId, std::uint32_t>>> neighbors_;
};

struct BaselineRecommendation {
    ScoredTagList items;
    std::vector<TagId> skipped_seeds; // seed tags absent from the statistics
};

/// Co-occurrence vote aggregation: score(j) = sum over usable seed tags i of
/// P(t_j | t_i); seed tags excluded from the output, ties by ascending index.
/// Seeds absent from the statistics are skipped and reported; throws
/// DataError when none are usable.
BaselineRecommendation tagcoor_recommend(const CooccurrenceStats& stats,
                                         std::span<const TagId> seed_tags, std::size_t n);

/// Candidate tags with multiplicity, keyed in ascending tag order.
using CandidateMultiset = std::map<TagId, std::uint32_t>;

/// Neighborhood collection for the collaborative-filtering baselines: ranks
/// posts by cosine similarity between the seed's binary tag vector and each
/// post's, keeps the top m_neighbors posts with positive similarity (ties by
/// ascending post order), and returns their tags minus the seed, with
/// multiplicity.
CandidateMultiset cf_candidates(const Corpus& corpus, std::span<const TagId> seed_tags,
                                std::size_t m_neighbors);

/// Top n candidates by multiplicity, ties by ascending index.
ScoredTagList cf_frequency_rank(const CandidateMultiset& candidates, std::size_t n);

/// L2-regularized least squares mapping each post's binary tag vector to
/// log(1 + views). Solved by conjugate gradient on the regularized normal
/// equations, so no dense T x T matrix is ever formed; with lambda > 0 the
/// system is always solvable. Deterministic.
std::vector<double> train_tag_weights(const Corpus& corpus, double lambda = 1.0);

/// score(tag) = multiplicity(tag) * weight(tag); top n, ties by index.
ScoredTagList cf_dfw_rank(const CandidateMultiset& candidates, std::span<const double> weights,
                          std::size_t n);

} // namespace tagrank
