#include "tagrank/adjacency.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tagrank/errors.hpp"
#include "tagrank/util.hpp"

namespace tagrank {

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::FP:
        return "fp";
    case Variant::U:
        return "u";
    case Variant::UFP_PLUS:
        return "ufp-plus";
    case Variant::UFP_PRODUCT:
        return "ufp-product";
    }
    return "unknown";
}

std::optional<Variant> variant_from_string(std::string_view name) {
    if (name == "fp") {
        return Variant::FP;
    }
    if (name == "u") {
        return Variant::U;
    }
    if (name == "ufp-plus") {
        return Variant::UFP_PLUS;
    }
    if (name == "ufp-product") {
        return Variant::UFP_PRODUCT;
    }
    return std::nullopt;
}

std::span<const Variant> all_variants() {
    static constexpr std::array<Variant, 4> variants = {Variant::FP, Variant::U,
                                                        Variant::UFP_PLUS, Variant::UFP_PRODUCT};
    return variants;
}

namespace {

void check_options(const BuildOptions& opts) {
    if (!(opts.k >= 0.0) || !std::isfinite(opts.k)) {
        throw ConfigError("smoothing k must be a finite non-negative number");
    }
}

/// Popularity-share rows: entry (i, ctx) = (pop(ctx)+k) / denom(i) for every
/// context carrying tag i. denom adds k per context unless literal_k; a
/// non-positive denominator leaves the row empty.
SparseMatrix popularity_share_matrix(std::size_t tag_count, std::size_t context_count,
                                     const std::vector<std::vector<std::uint32_t>>& tag_contexts,
                                     const std::vector<double>& context_popularity,
                                     const BuildOptions& opts) {
    std::vector<std::size_t> offsets(tag_count + 1, 0);
    std::vector<std::uint32_t> columns;
    std::vector<double> values;
    for (std::size_t i = 0; i < tag_count; ++i) {
        const auto& contexts = tag_contexts[i];
        double denom = 0.0;
        for (std::uint32_t ctx : contexts) {
            denom += context_popularity[ctx] + (opts.literal_k ? 0.0 : opts.k);
        }
        if (denom > 0.0) {
            for (std::uint32_t ctx : contexts) {
                double v = (context_popularity[ctx] + opts.k) / denom;
                if (v != 0.0) {
                    columns.push_back(ctx);
                    values.push_back(v);
                }
            }
        }
        offsets[i + 1] = columns.size();
    }
    return SparseMatrix(tag_count, context_count, std::move(offsets), std::move(columns),
                        std::move(values));
}

void check_corpus_shape(const Corpus& corpus) {
    if (corpus.tag_count() == 0 || corpus.post_count() == 0) {
        throw DataError("matrix build requires at least one tag and one post");
    }
}

} // namespace

Submatrices build_content_submatrices(const Corpus& corpus, const BuildOptions& opts) {
    check_options(opts);
    check_corpus_shape(corpus);
    const std::size_t tag_count = corpus.tag_count();
    const std::size_t post_count = corpus.post_count();

    std::vector<std::vector<std::uint32_t>> tag_posts(tag_count);
    std::vector<double> post_views(post_count);
    for (std::size_t d = 0; d < post_count; ++d) {
        post_views[d] = static_cast<double>(corpus.posts[d].views);
        for (TagId t : corpus.posts[d].tags) {
            tag_posts[t].push_back(static_cast<std::uint32_t>(d));
        }
    }

    Submatrices out;
    out.popularity_share =
        popularity_share_matrix(tag_count, post_count, tag_posts, post_views, opts);

    // usage_fraction column d holds 1/|tags(d)| on each of the post's tags.
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t d = 0; d < post_count; ++d) {
        const double share = 1.0 / static_cast<double>(corpus.posts[d].tags.size());
        for (TagId t : corpus.posts[d].tags) {
            entries.push_back({t, static_cast<std::uint32_t>(d), share});
        }
    }
    out.usage_fraction = SparseMatrix::from_triplets(tag_count, post_count, std::move(entries));
    return out;
}

Submatrices build_user_submatrices(const Corpus& corpus, const BuildOptions& opts) {
    check_options(opts);
    if (corpus.tag_count() == 0 || corpus.user_count() == 0) {
        throw DataError("matrix build requires at least one tag and one user");
    }
    const std::size_t tag_count = corpus.tag_count();
    const std::size_t user_count = corpus.user_count();

    std::vector<std::vector<std::uint32_t>> tag_users(tag_count);
    std::vector<double> user_views(user_count);
    for (std::size_t l = 0; l < user_count; ++l) {
        user_views[l] = static_cast<double>(corpus.users[l].views);
        for (const auto& [tag, count] : corpus.users[l].tag_usage) {
            (void)count;
            tag_users[tag].push_back(static_cast<std::uint32_t>(l));
        }
    }

    Submatrices out;
    out.popularity_share =
        popularity_share_matrix(tag_count, user_count, tag_users, user_views, opts);

    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t l = 0; l < user_count; ++l) {
        const User& user = corpus.users[l];
        if (user.total_usage == 0) {
            continue;
        }
        const double total = static_cast<double>(user.total_usage);
        for (const auto& [tag, count] : user.tag_usage) {
            entries.push_back({tag, static_cast<std::uint32_t>(l),
                               static_cast<double>(count) / total});
        }
    }
    out.usage_fraction = SparseMatrix::from_triplets(tag_count, user_count, std::move(entries));
    return out;
}

namespace {

SparseMatrix drop_diagonal(const SparseMatrix& m) {
    std::vector<std::size_t> offsets(m.rows() + 1, 0);
    std::vector<std::uint32_t> columns;
    std::vector<double> values;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto cols = m.row_columns(i);
        auto vals = m.row_values(i);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            if (cols[p] != i) {
                columns.push_back(cols[p]);
                values.push_back(vals[p]);
            }
        }
        offsets[i + 1] = columns.size();
    }
    return SparseMatrix(m.rows(), m.cols(), std::move(offsets), std::move(columns),
                        std::move(values));
}

AdjacencyMatrix finish_adjacency(SparseMatrix raw, Variant variant, const BuildOptions& opts) {
    if (opts.zero_diagonal) {
        raw = drop_diagonal(raw);
    }
    auto [normalized, dangling] = normalize_rows(raw);
    for (std::size_t i = 0; i < normalized.rows(); ++i) {
        double sum = kahan_sum(normalized.row_values(i));
        if (sum != 0.0 && std::abs(sum - 1.0) > 1e-12) {
            throw NumericError("row normalization drifted beyond 1e-12");
        }
    }
    return AdjacencyMatrix{std::move(normalized), variant, opts.k, std::move(dangling)};
}

} // namespace

AdjacencyMatrix assemble_content_adjacency(const Submatrices& content, const BuildOptions& opts) {
    check_options(opts);
    if (content.popularity_share.rows() != content.usage_fraction.rows() ||
        content.popularity_share.cols() != content.usage_fraction.cols()) {
        throw DataError("assemble: submatrix dimension mismatch");
    }
    return finish_adjacency(multiply_transposed(content.popularity_share, content.usage_fraction),
                            Variant::FP, opts);
}

AdjacencyMatrix assemble_user_adjacency(const Submatrices& user, const BuildOptions& opts) {
    check_options(opts);
    if (user.popularity_share.rows() != user.usage_fraction.rows() ||
        user.popularity_share.cols() != user.usage_fraction.cols()) {
        throw DataError("assemble: submatrix dimension mismatch");
    }
    return finish_adjacency(multiply_transposed(user.popularity_share, user.usage_fraction),
                            Variant::U, opts);
}

AdjacencyMatrix combine(const AdjacencyMatrix& content, const AdjacencyMatrix& user,
                        Variant mode) {
    if (content.matrix.rows() != user.matrix.rows() ||
        content.matrix.cols() != user.matrix.cols()) {
        throw DataError("combine: vocabulary mismatch between adjacency matrices");
    }
    switch (mode) {
    case Variant::U: {
        AdjacencyMatrix out = user;
        out.variant = Variant::U;
        return out;
    }
    case Variant::UFP_PLUS: {
        auto [normalized, dangling] = normalize_rows(add(content.matrix, user.matrix));
        return AdjacencyMatrix{std::move(normalized), Variant::UFP_PLUS, content.smoothing_k,
                               std::move(dangling)};
    }
    case Variant::UFP_PRODUCT: {
        auto [normalized, dangling] = normalize_rows(hadamard(content.matrix, user.matrix));
        return AdjacencyMatrix{std::move(normalized), Variant::UFP_PRODUCT, content.smoothing_k,
                               std::move(dangling)};
    }
    case Variant::FP:
        break;
    }
    throw ConfigError("combine mode must be u, ufp-plus, or ufp-product");
}

std::map<Variant, AdjacencyMatrix> build_adjacency_variants(const Corpus& corpus,
                                                            const BuildOptions& opts,
                                                            std::span<const Variant> requested) {
    check_options(opts);
    bool want_content = false;
    bool want_user = false;
    for (Variant v : requested) {
        want_content |= (v == Variant::FP || v == Variant::UFP_PLUS || v == Variant::UFP_PRODUCT);
        want_user |= (v != Variant::FP);
    }

    std::optional<AdjacencyMatrix> content;
    std::optional<AdjacencyMatrix> user;
    if (want_content) {
        content = assemble_content_adjacency(build_content_submatrices(corpus, opts), opts);
    }
    if (want_user) {
        user = assemble_user_adjacency(build_user_submatrices(corpus, opts), opts);
    }

    std::map<Variant, AdjacencyMatrix> out;
    for (Variant v : requested) {
        if (out.contains(v)) {
            continue;
        }
        switch (v) {
        case Variant::FP:
            out.emplace(v, *content);
            break;
        case Variant::U:
        case Variant::UFP_PLUS:
        case Variant::UFP_PRODUCT:
            out.emplace(v, combine(v == Variant::U ? *user : *content, *user, v));
            break;
        }
    }
    return out;
}

} // namespace tagrank
