#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tagrank/adjacency.hpp"
#include "tagrank/types.hpp"

namespace tagrank {

/// Teleport distribution for the damped iteration. mass is the sum of
/// values and must be positive.
struct PreferenceVector {
    std::vector<double> values;
    double mass = 0.0;
};

/// Every entry mass / tag_count.
PreferenceVector uniform_preference(std::size_t tag_count, double mass);

/// 1 on the given tags, 0 elsewhere; mass equals the number of distinct
/// tags. Throws ConfigError on an empty set or an index >= tag_count.
PreferenceVector indicator_preference(std::span<const TagId> tags, std::size_t tag_count);

struct IterationConfig {
    double alpha = 0.85;           // damping: weight of graph propagation per step
    std::size_t max_iterations = 100;
    double tolerance = 1e-9;       // L1 change threshold for convergence
};

struct IterationStats {
    std::size_t iteration = 0;
    double l1_delta = 0.0;
    double mass = 0.0; // sum of the score vector after the rescale step
};

using IterationObserver = std::function<void(const IterationStats&)>;

struct PowerIterationResult {
    std::vector<double> scores;
    std::size_t iterations = 0;
    bool converged = false;
    double last_delta = 0.0;
};

/// Damped power iteration over a row-normalized adjacency matrix.
///
/// Starting from a uniform vector summing to mass(p), each step propagates
/// score along the weighted edges (new r_j = sum_i A(i,j) r_i), damps it with
/// alpha, adds (1-alpha) p, and rescales the result back to mass(p) so that
/// mass lost through dangling rows is restored. Stops when the L1 change
/// drops below tolerance or max_iterations is reached.
PowerIterationResult power_iterate(const AdjacencyMatrix& a, const PreferenceVector& p,
                                   const IterationConfig& cfg = {},
                                   const IterationObserver& observer = {});

struct Recommendation {
    ScoredTagList items;
    bool shortfall = false; // fewer than n tags had positive connectivity
};

/// Seed-biased minus baseline stationary scores, cached baseline.
///
/// recommend() runs the iteration with an indicator preference over the seed
/// tags, subtracts the equal-mass uniform-preference solution, and returns
/// the highest-difference tags outside the seed. The uniform-preference
/// solution is computed once per engine at unit mass and scaled, since it is
/// linear in preference mass.
class Recommender {
public:
    explicit Recommender(const AdjacencyMatrix& a, IterationConfig cfg = {});

    /// Top n tags by score difference, seed tags excluded, ties broken by
    /// ascending tag index. Tags whose difference is within the iteration
    /// tolerance of zero count as unconnected and are never returned.
    Recommendation recommend(std::span<const TagId> seed_tags, std::size_t n) const;

    /// Full descending ranking under the uniform preference, ties by index.
    ScoredTagList rank_all() const;

    /// Baseline stationary vector for unit preference mass.
    const std::vector<double>& unit_baseline() const;

    const IterationConfig& config() const { return cfg_; }

private:
    const AdjacencyMatrix& adjacency_;
    IterationConfig cfg_;
    mutable std::optional<std::vector<double>> unit_baseline_;
};

/// One-shot conveniences over a temporary Recommender.
Recommendation recommend(const AdjacencyMatrix& a, std::span<const TagId> seed_tags,
                         std::size_t n, const IterationConfig& cfg = {});
ScoredTagList rank_all(const AdjacencyMatrix& a, const IterationConfig& cfg = {});

} // namespace tagrank
