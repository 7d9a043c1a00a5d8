// tagrank: build popularity-weighted tag co-occurrence indexes, rank and
// recommend tags, and compare recommendation methods offline.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tagrank/adjacency.hpp"
#include "tagrank/baselines.hpp"
#include "tagrank/corpus.hpp"
#include "tagrank/errors.hpp"
#include "tagrank/eval.hpp"
#include "tagrank/index_io.hpp"
#include "tagrank/ranker.hpp"
#include "tagrank/util.hpp"

namespace {

using namespace tagrank;

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;
constexpr int kExitNumeric = 5;

const std::vector<std::string> kGraphMethods = {"fp", "u", "ufp-plus", "ufp-product"};
const std::vector<std::string> kAllMethods = {"fp",      "u",  "ufp-plus", "ufp-product",
                                              "tagcoor", "cf", "cf-dfw"};

void require_known_method(const std::string& method) {
    for (const std::string& known : kAllMethods) {
        if (method == known) {
            return;
        }
    }
    throw ConfigError("unknown method '" + method + "'");
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void echo_config(const std::string& command, const ConfigEcho& entries) {
    std::cerr << "# " << command << " config:";
    for (const auto& [key, value] : entries) {
        std::cerr << ' ' << key << '=' << value;
    }
    std::cerr << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open output file '" + path + "'");
    }
    return out;
}

struct BuildArgs {
    std::string corpus_path;
    std::string index_path;
    double k = 1.0;
    bool literal_k = false;
    bool zero_diagonal = false;
    double ridge_lambda = 1.0;
    std::vector<std::string> variants = kGraphMethods;
};

void cmd_build(const BuildArgs& args) {
    BuildOptions opts{.k = args.k, .literal_k = args.literal_k,
                      .zero_diagonal = args.zero_diagonal};
    if (!(args.k >= 0.0)) {
        throw ConfigError("smoothing k must be non-negative");
    }
    if (!(args.ridge_lambda > 0.0)) {
        throw ConfigError("ridge lambda must be positive");
    }
    std::vector<Variant> requested;
    for (const std::string& name : args.variants) {
        auto v = variant_from_string(name);
        if (!v) {
            throw ConfigError("unknown variant '" + name + "'");
        }
        requested.push_back(*v);
    }

    ConfigEcho echo = {{"corpus", args.corpus_path},
                       {"index", args.index_path},
                       {"k", format_double(args.k)},
                       {"literal-k", args.literal_k ? "1" : "0"},
                       {"zero-diagonal", args.zero_diagonal ? "1" : "0"},
                       {"ridge-lambda", format_double(args.ridge_lambda)}};
    echo_config("build", echo);

    Corpus corpus = ingest_file(args.corpus_path);
    ValidationReport report = validate(corpus);
    if (!report.ok()) {
        for (const Violation& v : report.violations) {
            std::cerr << "validation: " << v.detail << '\n';
        }
        throw DataError("corpus failed validation with " +
                        std::to_string(report.violations.size()) + " violation(s)");
    }

    TagIndex index = build_tag_index(std::move(corpus), opts, requested, args.ridge_lambda);
    save_index(index, args.index_path);

    const CorpusStats& stats = report.stats;
    std::cout << "posts: " << stats.post_count << '\n'
              << "users: " << stats.user_count << '\n'
              << "unique tags: " << stats.tag_count << '\n'
              << "mean tags per post: " << format_double(stats.mean_tags_per_post) << '\n'
              << "mean views per post: " << format_double(stats.mean_views_per_post) << '\n'
              << "mean posts per user: " << format_double(stats.mean_posts_per_user) << '\n'
              << "mean views per user: " << format_double(stats.mean_views_per_user) << '\n';
    if (index.corpus.ingest_stats.duplicate_tags_collapsed > 0) {
        std::cout << "duplicate tags collapsed: "
                  << index.corpus.ingest_stats.duplicate_tags_collapsed << '\n';
    }
    for (const auto& [variant, adjacency] : index.matrices) {
        std::cout << "variant " << to_string(variant) << ": "
                  << adjacency.matrix.entry_count() << " entries, "
                  << adjacency.dangling_rows.size() << " dangling rows\n";
    }
    std::cout << "index written: " << args.index_path << '\n';
}

struct SeedPost {
    std::string post_id;
    std::vector<std::string> tags;
};

std::vector<SeedPost> parse_seed_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open seed file '" + path + "'");
    }
    std::vector<SeedPost> posts;
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
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw DataError("expected 2 tab-separated columns in seed file", line_no);
        }
        SeedPost post;
        post.post_id = line.substr(0, tab);
        std::string tags = line.substr(tab + 1);
        std::size_t start = 0;
        while (true) {
            std::size_t comma = tags.find(',', start);
            post.tags.push_back(tags.substr(start, comma - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (post.tags.empty() || (post.tags.size() == 1 && post.tags[0].empty())) {
            throw DataError("empty seed tag list", line_no);
        }
        posts.push_back(std::move(post));
    }
    return posts;
}

/// Resolves raw tag names against the vocabulary; unknown names are reported
/// on stderr and skipped.
std::vector<TagId> resolve_seeds(const Vocabulary& vocabulary,
                                 const std::vector<std::string>& names,
                                 const std::string& context) {
    std::vector<TagId> ids;
    std::set<TagId> seen;
    for (const std::string& raw : names) {
        std::string tag = normalize_tag(raw);
        if (tag.empty()) {
            continue;
        }
        auto id = vocabulary.find(tag);
        if (!id) {
            std::cerr << "warning: " << context << ": unknown seed tag '" << tag
                      << "' skipped\n";
            continue;
        }
        if (seen.insert(*id).second) {
            ids.push_back(*id);
        }
    }
    return ids;
}

/// Per-method state shared across seed posts in one invocation.
struct MethodEngines {
    const TagIndex& index;
    IterationConfig cfg;
    std::size_t neighbors = 25;
    std::map<Variant, Recommender> graph;
    std::optional<CooccurrenceStats> stats;
    std::vector<double> weights;

    explicit MethodEngines(const TagIndex& idx, IterationConfig c, std::size_t m)
        : index(idx), cfg(c), neighbors(m) {}

    ScoredTagList run(const std::string& method, std::span<const TagId> seed, std::size_t n) {
        if (auto variant = variant_from_string(method)) {
            auto it = graph.find(*variant);
            if (it == graph.end()) {
                it = graph.emplace(*variant, Recommender(index.require_variant(*variant), cfg))
                         .first;
            }
            return it->second.recommend(seed, n).items;
        }
        if (method == "tagcoor") {
            if (!stats) {
                stats = CooccurrenceStats::from_corpus(index.corpus);
            }
            return tagcoor_recommend(*stats, seed, n).items;
        }
        CandidateMultiset candidates = cf_candidates(index.corpus, seed, neighbors);
        if (method == "cf") {
            return cf_frequency_rank(candidates, n);
        }
        if (method == "cf-dfw") {
            if (weights.empty()) {
                weights = index.tag_weights.empty()
                              ? train_tag_weights(index.corpus, index.ridge_lambda)
                              : index.tag_weights;
            }
            return cf_dfw_rank(candidates, weights, n);
        }
        throw ConfigError("unknown method '" + method + "'");
    }
};

struct RecommendArgs {
    std::string index_path;
    std::string method;
    std::vector<std::string> seed_tags;
    std::string seed_file;
    std::size_t n = 10;
    double alpha = 0.85;
    double tolerance = 1e-9;
    std::size_t max_iterations = 100;
    std::size_t neighbors = 25;
    std::string out_path;
};

ConfigEcho common_echo(const RecommendArgs& args) {
    return {{"index", args.index_path},
            {"n", std::to_string(args.n)},
            {"alpha", format_double(args.alpha)},
            {"tolerance", format_double(args.tolerance)},
            {"max-iterations", std::to_string(args.max_iterations)},
            {"neighbors", std::to_string(args.neighbors)}};
}

void cmd_recommend(const RecommendArgs& args) {
    require_known_method(args.method);
    if (args.n < 1) {
        throw ConfigError("n must be at least 1");
    }
    if (args.seed_tags.empty() == args.seed_file.empty()) {
        throw ConfigError("provide exactly one of --seed or --seed-file");
    }

    ConfigEcho echo = common_echo(args);
    echo.insert(echo.begin(), {"method", args.method});
    echo_config("recommend", echo);

    TagIndex index = load_index(args.index_path);
    IterationConfig cfg{.alpha = args.alpha, .max_iterations = args.max_iterations,
                        .tolerance = args.tolerance};
    MethodEngines engines(index, cfg, args.neighbors);

    std::ofstream file_out;
    if (!args.out_path.empty()) {
        file_out = open_output(args.out_path);
    }
    std::ostream& out = args.out_path.empty() ? std::cout : file_out;
    out << "# method: " << args.method << '\n';

    if (!args.seed_tags.empty()) {
        std::vector<TagId> seed = resolve_seeds(index.corpus.vocabulary, args.seed_tags, "seed");
        if (seed.empty()) {
            throw DataError("no usable seed tags");
        }
        ScoredTagList items = engines.run(args.method, seed, args.n);
        if (items.size() < args.n) {
            out << "# shortfall: only " << items.size() << " of " << args.n
                << " requested tags available\n";
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            out << (i + 1) << '\t' << index.corpus.vocabulary.name(items[i].tag) << '\t'
                << format_double(items[i].score) << '\n';
        }
        return;
    }

    std::vector<SeedPost> posts = parse_seed_file(args.seed_file);
    bool any = false;
    for (const SeedPost& post : posts) {
        std::vector<TagId> seed =
            resolve_seeds(index.corpus.vocabulary, post.tags, "post " + post.post_id);
        if (seed.empty()) {
            std::cerr << "warning: post " << post.post_id << ": no usable seed tags, skipped\n";
            continue;
        }
        any = true;
        ScoredTagList items = engines.run(args.method, seed, args.n);
        for (std::size_t i = 0; i < items.size(); ++i) {
            out << post.post_id << '\t' << (i + 1) << '\t'
                << index.corpus.vocabulary.name(items[i].tag) << '\t'
                << format_double(items[i].score) << '\n';
        }
    }
    if (!any) {
        throw DataError("no seed post had usable seed tags");
    }
}

struct CompareArgs {
    std::string index_path;
    std::vector<std::string> methods;
    std::string seed_file;
    std::size_t n = 10;
    double alpha = 0.85;
    double tolerance = 1e-9;
    std::size_t max_iterations = 100;
    std::size_t neighbors = 25;
    std::string rank_variant = "ufp-product";
    std::string out_path;
    std::string runs_out;
};

void cmd_compare(const CompareArgs& args) {
    if (args.methods.size() < 2) {
        throw ConfigError("compare needs at least 2 methods");
    }
    for (const std::string& method : args.methods) {
        require_known_method(method);
    }
    if (args.n < 1) {
        throw ConfigError("n must be at least 1");
    }
    auto rank_variant = variant_from_string(args.rank_variant);
    if (!rank_variant) {
        throw ConfigError("unknown rank variant '" + args.rank_variant + "'");
    }

    ConfigEcho echo = {{"index", args.index_path},
                       {"seed-file", args.seed_file},
                       {"n", std::to_string(args.n)},
                       {"alpha", format_double(args.alpha)},
                       {"tolerance", format_double(args.tolerance)},
                       {"max-iterations", std::to_string(args.max_iterations)},
                       {"neighbors", std::to_string(args.neighbors)},
                       {"rank-variant", args.rank_variant}};
    echo_config("compare", echo);

    TagIndex index = load_index(args.index_path);
    IterationConfig cfg{.alpha = args.alpha, .max_iterations = args.max_iterations,
                        .tolerance = args.tolerance};
    MethodEngines engines(index, cfg, args.neighbors);

    std::vector<SeedPost> posts = parse_seed_file(args.seed_file);
    std::vector<std::string> post_ids;
    std::vector<std::vector<TagId>> seeds;
    for (const SeedPost& post : posts) {
        std::vector<TagId> seed =
            resolve_seeds(index.corpus.vocabulary, post.tags, "post " + post.post_id);
        if (seed.empty()) {
            std::cerr << "warning: post " << post.post_id << ": no usable seed tags, skipped\n";
            continue;
        }
        post_ids.push_back(post.post_id);
        seeds.push_back(std::move(seed));
    }
    if (post_ids.empty()) {
        throw DataError("no seed post had usable seed tags");
    }

    ConfigEcho snapshot = {{"k", format_double(index.options.k)},
                           {"literal-k", index.options.literal_k ? "1" : "0"},
                           {"zero-diagonal", index.options.zero_diagonal ? "1" : "0"},
                           {"ridge-lambda", format_double(index.ridge_lambda)},
                           {"n", std::to_string(args.n)},
                           {"alpha", format_double(args.alpha)},
                           {"tolerance", format_double(args.tolerance)},
                           {"max-iterations", std::to_string(args.max_iterations)},
                           {"neighbors", std::to_string(args.neighbors)}};

    std::vector<MethodRun> runs;
    for (const std::string& method : args.methods) {
        MethodRun run;
        run.method = method;
        run.config = snapshot;
        run.post_ids = post_ids;
        run.seeds = seeds;
        for (std::size_t i = 0; i < post_ids.size(); ++i) {
            run.recommendations.push_back(engines.run(method, seeds[i], args.n));
        }
        runs.push_back(std::move(run));
    }

    // Global ranking positions under the chosen variant (1-based).
    ScoredTagList ranking = rank_all(index.require_variant(*rank_variant), cfg);
    std::vector<std::size_t> global_rank(index.corpus.tag_count(), 0);
    for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
        global_rank[ranking[pos].tag] = pos + 1;
    }

    ComparisonReport report = build_comparison_report(runs, index.corpus, global_rank);
    if (args.out_path.empty()) {
        write_report_csv(report, std::cout);
    } else {
        std::ofstream out = open_output(args.out_path);
        write_report_csv(report, out);
    }
    if (!args.runs_out.empty()) {
        std::ofstream out = open_output(args.runs_out);
        write_method_runs(runs, index.corpus.vocabulary, out);
    }
}

void cmd_validate(const std::string& corpus_path) {
    echo_config("validate", {{"corpus", corpus_path}});
    Corpus corpus = ingest_file(corpus_path);
    ValidationReport report = validate(corpus);
    std::cout << "violations: " << report.violations.size() << '\n';
    for (const Violation& v : report.violations) {
        std::cout << "violation: " << v.detail << '\n';
    }
    const CorpusStats& stats = report.stats;
    std::cout << "posts: " << stats.post_count << '\n'
              << "users: " << stats.user_count << '\n'
              << "unique tags: " << stats.tag_count << '\n'
              << "mean tags per post: " << format_double(stats.mean_tags_per_post) << '\n'
              << "mean views per post: " << format_double(stats.mean_views_per_post) << '\n'
              << "mean posts per user: " << format_double(stats.mean_posts_per_user) << '\n'
              << "mean views per user: " << format_double(stats.mean_views_per_user) << '\n';
    if (!report.ok()) {
        throw DataError("corpus failed validation");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tag ranking and recommendation over popularity-weighted co-occurrence graphs"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "ingest a corpus and build an index");
    build->add_option("--corpus", build_args.corpus_path, "corpus TSV file")->required();
    build->add_option("--index", build_args.index_path, "output index file")->required();
    build->add_option("--k", build_args.k, "popularity smoothing constant");
    build->add_flag("--literal-k", build_args.literal_k, "add k in numerators only");
    build->add_flag("--zero-diagonal", build_args.zero_diagonal,
                    "drop self-pairs before normalization");
    build->add_option("--ridge-lambda", build_args.ridge_lambda,
                      "regularization for tag-weight training");
    build->add_option("--variants", build_args.variants, "adjacency variants to build")
        ->delimiter(',');
    build->callback([&build_args]() { cmd_build(build_args); });

    RecommendArgs rec_args;
    CLI::App* rec = app.add_subcommand("recommend", "recommend tags for seed tag sets");
    rec->add_option("--index", rec_args.index_path, "index file")->required();
    rec->add_option("--method", rec_args.method,
                    "fp, u, ufp-plus, ufp-product, tagcoor, cf, or cf-dfw")
        ->required();
    rec->add_option("--seed", rec_args.seed_tags, "seed tags")->delimiter(',');
    rec->add_option("--seed-file", rec_args.seed_file, "TSV of post_id<TAB>tag1,tag2,...");
    rec->add_option("-n,--top", rec_args.n, "number of tags to recommend");
    rec->add_option("--alpha", rec_args.alpha, "damping factor");
    rec->add_option("--tolerance", rec_args.tolerance, "iteration L1 stop threshold");
    rec->add_option("--max-iterations", rec_args.max_iterations, "iteration cap");
    rec->add_option("--neighbors", rec_args.neighbors, "cf neighborhood size");
    rec->add_option("--out", rec_args.out_path, "write rows to a file instead of stdout");
    rec->callback([&rec_args]() { cmd_recommend(rec_args); });

    CompareArgs cmp_args;
    CLI::App* cmp = app.add_subcommand("compare", "run several methods and report CSV");
    cmp->add_option("--index", cmp_args.index_path, "index file")->required();
    cmp->add_option("--methods", cmp_args.methods, "two or more methods")
        ->delimiter(',')
        ->required();
    cmp->add_option("--seed-file", cmp_args.seed_file, "TSV of post_id<TAB>tags")->required();
    cmp->add_option("-n,--top", cmp_args.n, "recommendations per post");
    cmp->add_option("--alpha", cmp_args.alpha, "damping factor");
    cmp->add_option("--tolerance", cmp_args.tolerance, "iteration L1 stop threshold");
    cmp->add_option("--max-iterations", cmp_args.max_iterations, "iteration cap");
    cmp->add_option("--neighbors", cmp_args.neighbors, "cf neighborhood size");
    cmp->add_option("--rank-variant", cmp_args.rank_variant,
                    "variant used for the global ranking metric");
    cmp->add_option("--out", cmp_args.out_path, "report CSV path (default stdout)");
    cmp->add_option("--runs-out", cmp_args.runs_out, "persist per-method runs to a file");
    cmp->callback([&cmp_args]() { cmd_compare(cmp_args); });

    std::string validate_corpus;
    CLI::App* val = app.add_subcommand("validate", "check a corpus file and print statistics");
    val->add_option("--corpus", validate_corpus, "corpus TSV file")->required();
    val->callback([&validate_corpus]() { cmd_validate(validate_corpus); });

    try {
        app.parse(argc, argv);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NotFoundError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnexpected;
    }
}
