#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tagrank/corpus.hpp"
#include "tagrank/types.hpp"

namespace tagrank {

/// One method's recommendations over a batch of seed posts, with enough
/// configuration captured to reproduce the run.
struct MethodRun {
    std::string method;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> post_ids;
    std::vector<std::vector<TagId>> seeds;
    std::vector<ScoredTagList> recommendations;

    std::size_t post_count() const { return post_ids.size(); }
};

struct OverlapStats {
    std::vector<double> per_post; // Jaccard similarity of the recommended sets
    double mean = 0.0;
};

/// Jaccard overlap of two runs over the same posts (same ids, same order);
/// throws DataError otherwise. Two empty sets count as identical (1.0).
OverlapStats overlap(const MethodRun& a, const MethodRun& b);

struct ProxyStats {
    double mean_views = 0.0;   // mean over all recommended tags of the tag's
                               // mean source-corpus post views; absent tags
                               // contribute 0
    double coverage = 0.0;     // fraction of recommended tags present in the corpus
    std::vector<double> per_post;
};

/// Offline popularity proxy. This is NOT a live view-count measurement; it
/// scores a recommendation by the historical views of source posts carrying
/// the recommended tags.
ProxyStats popularity_proxy(const MethodRun& run, const Corpus& corpus);

/// Mean views per tag over the corpus posts carrying it.
std::vector<double> tag_mean_views(const Corpus& corpus);

/// Text stamped on every generated report naming the proxy metric.
extern const char* const kProxyDisclaimer;

struct ComparisonReport {
    std::string disclaimer;
    std::vector<std::pair<std::string, std::string>> notes; // config snapshots etc.

    struct MethodSummary {
        std::string method;
        double proxy_mean_views = 0.0;
        double proxy_coverage = 0.0;
        double mean_global_rank = 0.0; // 1-based position in the global ranking
        bool has_global_rank = false;
    };
    std::vector<MethodSummary> methods;

    struct PairOverlap {
        std::string method_a;
        std::string method_b;
        double mean_jaccard = 0.0;
        std::vector<std::pair<std::string, double>> per_post;
    };
    std::vector<PairOverlap> overlaps;

    struct MethodDetail {
        std::string method;
        std::vector<std::pair<std::string, double>> proxy_per_post;
    };
    std::vector<MethodDetail> details;
};

/// Builds the full report: per-method proxy scores, all pairwise overlaps in
/// input order, per-post details, and (when tag_global_rank is non-empty,
/// tag -> 1-based rank) the mean global rank of recommended tags.
ComparisonReport build_comparison_report(std::span<const MethodRun> runs, const Corpus& corpus,
                                         std::span<const std::size_t> tag_global_rank = {});

/// Deterministic CSV (RFC-4180-style quoting, UTF-8):
///   kind,method_a,method_b,post_id,metric,value
/// Emitting the same report twice is byte-identical.
void write_report_csv(const ComparisonReport& report, std::ostream& out);

/// Line-based persistence of runs (tags by name) so that report numbers can
/// be re-derived later from the runs plus the corpus.
void write_method_runs(std::span<const MethodRun> runs, const Vocabulary& vocabulary,
                       std::ostream& out);
std::vector<MethodRun> load_method_runs(std::istream& in, const Vocabulary& vocabulary);

} // namespace tagrank
