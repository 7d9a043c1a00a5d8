#include "tagrank/eval.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "tagrank/errors.hpp"
#include "tagrank/util.hpp"

namespace tagrank {

const char* const kProxyDisclaimer =
    "popularity_proxy is an offline PROXY: the mean historical views of source-corpus posts "
    "carrying each recommended tag. It is not a live view-count measurement.";

namespace {

std::optional<std::string> config_value(const MethodRun& run, std::string_view key) {
    for (const auto& [k, v] : run.config) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

} // namespace

OverlapStats overlap(const MethodRun& a, const MethodRun& b) {
    if (a.post_ids != b.post_ids) {
        throw DataError("overlap: runs cover different post sets");
    }
    auto n_a = config_value(a, "n");
    auto n_b = config_value(b, "n");
    if (n_a && n_b && *n_a != *n_b) {
        throw DataError("overlap: runs used different n (" + *n_a + " vs " + *n_b + ")");
    }
    OverlapStats stats;
    stats.per_post.reserve(a.post_count());
    double total = 0.0;
    for (std::size_t i = 0; i < a.post_count(); ++i) {
        std::set<TagId> sa;
        std::set<TagId> sb;
        for (const ScoredTag& item : a.recommendations[i]) {
            sa.insert(item.tag);
        }
        for (const ScoredTag& item : b.recommendations[i]) {
            sb.insert(item.tag);
        }
        double jaccard = 1.0; // two empty recommendation sets are identical
        if (!sa.empty() || !sb.empty()) {
            std::size_t inter = 0;
            for (TagId t : sa) {
                inter += sb.contains(t) ? 1 : 0;
            }
            jaccard = static_cast<double>(inter) /
                      static_cast<double>(sa.size() + sb.size() - inter);
        }
        stats.per_post.push_back(jaccard);
        total += jaccard;
    }
    stats.mean = a.post_count() > 0 ? total / static_cast<double>(a.post_count()) : 0.0;
    return stats;
}

std::vector<double> tag_mean_views(const Corpus& corpus) {
    std::vector<double> sums(corpus.tag_count(), 0.0);
    std::vector<std::size_t> counts(corpus.tag_count(), 0);
    for (const Post& post : corpus.posts) {
        for (TagId t : post.tags) {
            if (t < sums.size()) {
                sums[t] += static_cast<double>(post.views);
                ++counts[t];
            }
        }
    }
    for (std::size_t t = 0; t < sums.size(); ++t) {
        if (counts[t] > 0) {
            sums[t] /= static_cast<double>(counts[t]);
        }
    }
    return sums;
}

ProxyStats popularity_proxy(const MethodRun& run, const Corpus& corpus) {
    const std::vector<double> means = tag_mean_views(corpus);
    std::vector<std::size_t> counts(corpus.tag_count(), 0);
    for (const Post& post : corpus.posts) {
        for (TagId t : post.tags) {
            if (t < counts.size()) {
                ++counts[t];
            }
        }
    }

    ProxyStats stats;
    stats.per_post.reserve(run.post_count());
    double total = 0.0;
    std::size_t recommended = 0;
    std::size_t covered = 0;
    for (const ScoredTagList& recs : run.recommendations) {
        double post_total = 0.0;
        for (const ScoredTag& item : recs) {
            ++recommended;
            if (item.tag < counts.size() && counts[item.tag] > 0) {
                ++covered;
                post_total += means[item.tag];
            }
        }
        stats.per_post.push_back(recs.empty() ? 0.0
                                              : post_total / static_cast<double>(recs.size()));
        total += post_total;
    }
    stats.mean_views = recommended > 0 ? total / static_cast<double>(recommended) : 0.0;
    stats.coverage =
        recommended > 0 ? static_cast<double>(covered) / static_cast<double>(recommended) : 0.0;
    return stats;
}

ComparisonReport build_comparison_report(std::span<const MethodRun> runs, const Corpus& corpus,
                                         std::span<const std::size_t> tag_global_rank) {
    ComparisonReport report;
    report.disclaimer = kProxyDisclaimer;
    for (const MethodRun& run : runs) {
        for (const auto& [key, value] : run.config) {
            report.notes.push_back({run.method + "." + key, value});
        }
    }

    for (const MethodRun& run : runs) {
        ProxyStats proxy = popularity_proxy(run, corpus);
        ComparisonReport::MethodSummary summary;
        summary.method = run.method;
        summary.proxy_mean_views = proxy.mean_views;
        summary.proxy_coverage = proxy.coverage;
        if (!tag_global_rank.empty()) {
            double rank_total = 0.0;
            std::size_t count = 0;
            for (const ScoredTagList& recs : run.recommendations) {
                for (const ScoredTag& item : recs) {
                    if (item.tag < tag_global_rank.size()) {
                        rank_total += static_cast<double>(tag_global_rank[item.tag]);
                        ++count;
                    }
                }
            }
            summary.has_global_rank = true;
            summary.mean_global_rank = count > 0 ? rank_total / static_cast<double>(count) : 0.0;
        }
        report.methods.push_back(std::move(summary));

        ComparisonReport::MethodDetail detail;
        detail.method = run.method;
        for (std::size_t i = 0; i < run.post_count(); ++i) {
            detail.proxy_per_post.push_back({run.post_ids[i], proxy.per_post[i]});
        }
        report.details.push_back(std::move(detail));
    }

    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            OverlapStats stats = overlap(runs[i], runs[j]);
            ComparisonReport::PairOverlap pair;
            pair.method_a = runs[i].method;
            pair.method_b = runs[j].method;
            pair.mean_jaccard = stats.mean;
            for (std::size_t p = 0; p < runs[i].post_count(); ++p) {
                pair.per_post.push_back({runs[i].post_ids[p], stats.per_post[p]});
            }
            report.overlaps.push_back(std::move(pair));
        }
    }
    return report;
}

namespace {

std::string csv_escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

void csv_row(std::ostream& out, std::string_view kind, std::string_view method_a,
             std::string_view method_b, std::string_view post_id, std::string_view metric,
             std::string_view value) {
    out << csv_escape(kind) << ',' << csv_escape(method_a) << ',' << csv_escape(method_b) << ','
        << csv_escape(post_id) << ',' << csv_escape(metric) << ',' << csv_escape(value) << '\n';
}

} // namespace

void write_report_csv(const ComparisonReport& report, std::ostream& out) {
    out << "kind,method_a,method_b,post_id,metric,value\n";
    if (!report.disclaimer.empty()) {
        csv_row(out, "note", "", "", "", "disclaimer", report.disclaimer);
    }
    for (const auto& [key, value] : report.notes) {
        csv_row(out, "note", "", "", "", key, value);
    }
    for (const auto& m : report.methods) {
        csv_row(out, "summary", m.method, "", "", "popularity_proxy_mean_views",
                format_double(m.proxy_mean_views));
        csv_row(out, "summary", m.method, "", "", "proxy_coverage",
                format_double(m.proxy_coverage));
        if (m.has_global_rank) {
            csv_row(out, "summary", m.method, "", "", "mean_global_rank",
                    format_double(m.mean_global_rank));
        }
    }
    for (const auto& pair : report.overlaps) {
        csv_row(out, "summary", pair.method_a, pair.method_b, "", "mean_jaccard",
                format_double(pair.mean_jaccard));
    }
    for (const auto& pair : report.overlaps) {
        for (const auto& [post_id, value] : pair.per_post) {
            csv_row(out, "detail", pair.method_a, pair.method_b, post_id, "jaccard",
                    format_double(value));
        }
    }
    for (const auto& detail : report.details) {
        for (const auto& [post_id, value] : detail.proxy_per_post) {
            csv_row(out, "detail", detail.method, "", post_id, "popularity_proxy",
                    format_double(value));
        }
    }
}

void write_method_runs(std::span<const MethodRun> runs, const Vocabulary& vocabulary,
                       std::ostream& out) {
    for (const MethodRun& run : runs) {
        out << "run\t" << run.method << '\n';
        for (const auto& [key, value] : run.config) {
            out << "config\t" << key << '\t' << value << '\n';
        }
        for (std::size_t i = 0; i < run.post_count(); ++i) {
            out << "post\t" << run.post_ids[i] << '\t';
            const auto& seeds = run.seeds[i];
            for (std::size_t s = 0; s < seeds.size(); ++s) {
                out << (s > 0 ? "," : "") << vocabulary.name(seeds[s]);
            }
            out << '\t';
            const auto& recs = run.recommendations[i];
            for (std::size_t r = 0; r < recs.size(); ++r) {
                out << (r > 0 ? "," : "") << vocabulary.name(recs[r].tag) << ':'
                    << format_double(recs[r].score);
            }
            out << '\n';
        }
    }
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

TagId resolve_tag(const Vocabulary& vocabulary, const std::string& name, std::size_t line) {
    auto id = vocabulary.find(name);
    if (!id) {
        throw DataError("unknown tag '" + name + "' in run file", line);
    }
    return *id;
}

} // namespace

std::vector<MethodRun> load_method_runs(std::istream& in, const Vocabulary& vocabulary) {
    std::vector<MethodRun> runs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_on(line, '\t');
        if (fields[0] == "run") {
            if (fields.size() != 2) {
                throw DataError("malformed run header", line_no);
            }
            MethodRun run;
            run.method = fields[1];
            runs.push_back(std::move(run));
        } else if (fields[0] == "config") {
            if (fields.size() != 3 || runs.empty()) {
                throw DataError("malformed config line", line_no);
            }
            runs.back().config.push_back({fields[1], fields[2]});
        } else if (fields[0] == "post") {
            if (fields.size() != 4 || runs.empty()) {
                throw DataError("malformed post line", line_no);
            }
            MethodRun& run = runs.back();
            run.post_ids.push_back(fields[1]);
            std::vector<TagId> seeds;
            for (const std::string& name : split_on(fields[2], ',')) {
                if (!name.empty()) {
                    seeds.push_back(resolve_tag(vocabulary, name, line_no));
                }
            }
            run.seeds.push_back(std::move(seeds));
            ScoredTagList recs;
            if (!fields[3].empty()) {
                for (const std::string& entry : split_on(fields[3], ',')) {
                    std::size_t colon = entry.rfind(':');
                    if (colon == std::string::npos) {
                        throw DataError("malformed recommendation entry '" + entry + "'",
                                        line_no);
                    }
                    TagId tag = resolve_tag(vocabulary, entry.substr(0, colon), line_no);
                    recs.push_back({tag, std::stod(entry.substr(colon + 1))});
                }
            }
            run.recommendations.push_back(std::move(recs));
        } else {
            throw DataError("unknown record kind '" + fields[0] + "'", line_no);
        }
    }
    return runs;
}

} // namespace tagrank
