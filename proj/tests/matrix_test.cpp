#include <doctest.h>

#include <algorithm>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "tagrank/adjacency.hpp"
#include "tagrank/errors.hpp"
#include "tagrank/ranker.hpp"
#include "tagrank/util.hpp"

using namespace tagrank;
using namespace tagrank::testing;

namespace {

const BuildOptions kNoSmoothing{.k = 0.0, .literal_k = false, .zero_diagonal = false};

} // namespace

TEST_CASE("content submatrices on the toy corpus, k = 0") {
    Corpus corpus = toy_corpus();
    auto [share, fraction] = build_content_submatrices(corpus, kNoSmoothing);

    // building row distributes over posts #1 (15 views) and #3 (5 views).
    CHECK(share.at(0, 0) == 0.75);
    CHECK(share.at(0, 1) == 0.0);
    CHECK(share.at(0, 2) == 0.25);
    CHECK(share.at(0, 3) == 0.0);

    // Post #1 splits its unit over its two tags.
    CHECK(fraction.at(0, 0) == 0.5);
    CHECK(fraction.at(1, 0) == 0.5);
    CHECK(fraction.at(2, 0) == 0.0);

    // The content-side popularity split of post #1 is 15/2 per tag.
    CHECK(static_cast<double>(corpus.posts[0].views) * fraction.at(0, 0) == 7.5);

    // Rows of the share matrix sum to 1, columns of the fraction matrix too.
    for (double sum : share.row_sums()) {
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    auto fraction_cols = transpose(fraction).row_sums();
    for (double sum : fraction_cols) {
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("user submatrices on the toy corpus, k = 0") {
    Corpus corpus = toy_corpus();
    auto [share, fraction] = build_user_submatrices(corpus, kNoSmoothing);

    // Q used nature on two of four attachments: 2/4 of the score 45.
    CHECK(fraction.at(0, 0) == 0.25);
    CHECK(fraction.at(1, 0) == 0.5);
    CHECK(fraction.at(2, 0) == 0.25);
    CHECK(fraction.at(1, 0) * 45.0 == 22.5);

    // building row splits over users Q (45) and R (5).
    CHECK(share.at(0, 0) == 0.9);
    CHECK(share.at(0, 1) == 0.1);
    CHECK(share.at(0, 2) == 0.0);
}

TEST_CASE("single post, single tag degenerates to [[1]]") {
    Corpus corpus = make_corpus({{"p", "u", 9, {"only"}}});
    for (double k : {0.0, 1.0, 3.5}) {
        BuildOptions opts{.k = k, .literal_k = false, .zero_diagonal = false};
        auto content = build_content_submatrices(corpus, opts);
        CHECK(content.popularity_share.at(0, 0) == 1.0);
        CHECK(content.usage_fraction.at(0, 0) == 1.0);
        auto user = build_user_submatrices(corpus, opts);
        CHECK(user.popularity_share.at(0, 0) == 1.0);
        CHECK(user.usage_fraction.at(0, 0) == 1.0);
    }
}

TEST_CASE("assembled adjacency entries on the toy corpus") {
    Corpus corpus = toy_corpus();
    auto content = build_content_submatrices(corpus, kNoSmoothing);
    auto user = build_user_submatrices(corpus, kNoSmoothing);

    // Pre-normalization products.
    SparseMatrix fp_raw = multiply_transposed(content.popularity_share, content.usage_fraction);
    CHECK(fp_raw.at(0, 1) == doctest::Approx(0.375).epsilon(1e-15));
    SparseMatrix up_raw = multiply_transposed(user.popularity_share, user.usage_fraction);
    CHECK(up_raw.at(1, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(up_raw.at(3, 0) == 0.0); // animal and building share no user

    AdjacencyMatrix fp = assemble_content_adjacency(content, kNoSmoothing);
    for (std::size_t i = 0; i < fp.matrix.rows(); ++i) {
        CHECK(kahan_sum(fp.matrix.row_values(i)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(fp.dangling_rows.empty());
}

TEST_CASE("disjoint single-tag posts produce no off-diagonal entries") {
    Corpus corpus = make_corpus({{"p1", "u1", 3, {"a"}}, {"p2", "u2", 4, {"b"}}});
    AdjacencyMatrix fp =
        assemble_content_adjacency(build_content_submatrices(corpus, kNoSmoothing), kNoSmoothing);
    CHECK(fp.matrix.at(0, 1) == 0.0);
    CHECK(fp.matrix.at(1, 0) == 0.0);
}

TEST_CASE("combine modes on the toy corpus") {
    Corpus corpus = toy_corpus();
    auto fp = assemble_content_adjacency(build_content_submatrices(corpus, kNoSmoothing),
                                         kNoSmoothing);
    auto up = assemble_user_adjacency(build_user_submatrices(corpus, kNoSmoothing), kNoSmoothing);

    AdjacencyMatrix u = combine(fp, up, Variant::U);
    CHECK(u.matrix == up.matrix); // bit-identical passthrough
    CHECK(u.variant == Variant::U);

    AdjacencyMatrix plus = combine(fp, up, Variant::UFP_PLUS);
    AdjacencyMatrix product = combine(fp, up, Variant::UFP_PRODUCT);
    TagId building = tag_id(corpus, "building");
    TagId nature = tag_id(corpus, "nature");
    TagId animal = tag_id(corpus, "animal");
    CHECK(plus.matrix.at(building, nature) > 0.0);
    CHECK(product.matrix.at(building, animal) == 0.0);

    // The product keeps only pairs connected through both a shared post and
    // a shared user.
    for (std::size_t i = 0; i < product.matrix.rows(); ++i) {
        for (std::uint32_t j = 0; j < product.matrix.cols(); ++j) {
            bool stored = product.matrix.at(i, j) != 0.0;
            CHECK(stored == (fp.matrix.at(i, j) != 0.0 && up.matrix.at(i, j) != 0.0));
        }
    }
}

TEST_CASE("combine rejects mismatched shapes and bad modes") {
    Corpus corpus = toy_corpus();
    Corpus small = make_corpus({{"p", "u", 1, {"x"}}});
    auto fp = assemble_content_adjacency(build_content_submatrices(corpus, kNoSmoothing),
                                         kNoSmoothing);
    auto up = assemble_user_adjacency(build_user_submatrices(corpus, kNoSmoothing), kNoSmoothing);
    auto tiny = assemble_user_adjacency(build_user_submatrices(small, kNoSmoothing), kNoSmoothing);
    CHECK_THROWS_AS(combine(fp, tiny, Variant::UFP_PLUS), DataError);
    CHECK_THROWS_AS(combine(fp, up, Variant::FP), ConfigError);
}

TEST_CASE("hadamard annihilation leaves only the diagonal") {
    // Two users, each owning one single-tag post: no off-diagonal user-side
    // support, so the product has diagonal support only.
    Corpus corpus = make_corpus({{"p1", "u1", 2, {"a"}}, {"p2", "u2", 2, {"b"}}});
    auto variants = build_adjacency_variants(corpus, BuildOptions{}, all_variants());
    const SparseMatrix& product = variants.at(Variant::UFP_PRODUCT).matrix;
    CHECK(product.at(0, 0) == 1.0);
    CHECK(product.at(1, 1) == 1.0);
    CHECK(product.at(0, 1) == 0.0);
    CHECK(product.at(1, 0) == 0.0);
}

TEST_CASE("every variant matches the dense brute-force oracle") {
    TestRng rng(101);
    const double ks[] = {0.0, 0.5, 1.0};
    for (int round = 0; round < 60; ++round) {
        Corpus corpus = random_corpus(rng);
        BuildOptions opts;
        opts.k = ks[round % 3];
        opts.literal_k = (round % 2) == 1;
        opts.zero_diagonal = (round % 5) == 0;

        auto variants = build_adjacency_variants(corpus, opts, all_variants());
        for (Variant v : all_variants()) {
            Dense expected = dense_variant(corpus, opts, v);
            INFO("variant ", to_string(v), " round ", round);
            CHECK(max_abs_diff(expected, variants.at(v).matrix) < 1e-12);
        }
    }
}

TEST_CASE("row normalization invariant holds for every built variant") {
    TestRng rng(555);
    for (int round = 0; round < 20; ++round) {
        Corpus corpus = random_corpus(rng);
        auto variants = build_adjacency_variants(corpus, BuildOptions{}, all_variants());
        for (const auto& [v, adjacency] : variants) {
            for (std::size_t i = 0; i < adjacency.matrix.rows(); ++i) {
                double sum = kahan_sum(adjacency.matrix.row_values(i));
                bool dangling =
                    std::find(adjacency.dangling_rows.begin(), adjacency.dangling_rows.end(),
                              static_cast<std::uint32_t>(i)) != adjacency.dangling_rows.end();
                if (dangling) {
                    CHECK(sum == 0.0);
                } else {
                    CHECK(std::abs(sum - 1.0) <= 1e-12);
                }
                for (double value : adjacency.matrix.row_values(i)) {
                    CHECK(value >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("support characterization with positive smoothing") {
    TestRng rng(202);
    for (int round = 0; round < 25; ++round) {
        Corpus corpus = random_corpus(rng);
        auto variants = build_adjacency_variants(corpus, BuildOptions{}, all_variants());
        const SparseMatrix& fp = variants.at(Variant::FP).matrix;
        const SparseMatrix& up = variants.at(Variant::U).matrix;
        const SparseMatrix& product = variants.at(Variant::UFP_PRODUCT).matrix;

        const std::size_t n = corpus.tag_count();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::uint32_t j = 0; j < n; ++j) {
                bool shared_post = false;
                for (const Post& post : corpus.posts) {
                    bool has_i = std::find(post.tags.begin(), post.tags.end(), i) != post.tags.end();
                    bool has_j = std::find(post.tags.begin(), post.tags.end(), j) != post.tags.end();
                    shared_post |= (has_i && has_j);
                }
                bool shared_user = false;
                for (const User& user : corpus.users) {
                    shared_user |= user.tag_usage.contains(static_cast<TagId>(i)) &&
                                   user.tag_usage.contains(j);
                }
                CHECK((fp.at(i, j) != 0.0) == shared_post);
                CHECK((up.at(i, j) != 0.0) == shared_user);
                CHECK((product.at(i, j) != 0.0) == (shared_post && shared_user));
            }
        }
    }
}

TEST_CASE("degenerate corpora give FP and UP identical support") {
    // Equal views, one post per user: each user's tag profile is exactly one
    // post's tag set.
    Corpus corpus = make_corpus({
        {"p1", "u1", 10, {"a", "b"}},
        {"p2", "u2", 10, {"b", "c"}},
        {"p3", "u3", 10, {"c"}},
    });
    auto variants =
        build_adjacency_variants(corpus, kNoSmoothing, std::array{Variant::FP, Variant::U});
    const SparseMatrix& fp = variants.at(Variant::FP).matrix;
    const SparseMatrix& up = variants.at(Variant::U).matrix;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::uint32_t j = 0; j < 3; ++j) {
            CHECK((fp.at(i, j) != 0.0) == (up.at(i, j) != 0.0));
        }
    }
}

TEST_CASE("literal numerator-only smoothing differs before normalization only") {
    Corpus corpus = toy_corpus();
    BuildOptions literal{.k = 1.0, .literal_k = true, .zero_diagonal = false};
    BuildOptions both{.k = 1.0, .literal_k = false, .zero_diagonal = false};

    auto literal_subs = build_content_submatrices(corpus, literal);
    auto both_subs = build_content_submatrices(corpus, both);
    // Numerator-only rows overshoot 1.
    CHECK(kahan_sum(literal_subs.popularity_share.row_values(0)) > 1.0);
    CHECK(kahan_sum(both_subs.popularity_share.row_values(0)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // The per-row rescaling cancels in the final normalized adjacency.
    auto literal_fp = assemble_content_adjacency(literal_subs, literal);
    auto both_fp = assemble_content_adjacency(both_subs, both);
    Dense literal_dense = dense_variant(corpus, literal, Variant::FP);
    CHECK(max_abs_diff(literal_dense, literal_fp.matrix) < 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::uint32_t j = 0; j < 4; ++j) {
            CHECK(literal_fp.matrix.at(i, j) ==
                  doctest::Approx(both_fp.matrix.at(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("literal smoothing with all-zero popularity leaves rows dangling") {
    // Numerator-only smoothing cannot rescue a tag whose posts all have zero
    // views: the raw denominator is zero and the row stays empty.
    Corpus corpus = make_corpus({{"p1", "u1", 0, {"a", "b"}}, {"p2", "u1", 7, {"c"}}});
    BuildOptions literal{.k = 1.0, .literal_k = true, .zero_diagonal = false};
    auto subs = build_content_submatrices(corpus, literal);
    CHECK(subs.popularity_share.row_columns(tag_id(corpus, "a")).empty());
    CHECK(subs.popularity_share.row_columns(tag_id(corpus, "c")).size() == 1);

    auto fp = assemble_content_adjacency(subs, literal);
    CHECK(max_abs_diff(dense_variant(corpus, literal, Variant::FP), fp.matrix) < 1e-12);
    CHECK(std::find(fp.dangling_rows.begin(), fp.dangling_rows.end(), tag_id(corpus, "a")) !=
          fp.dangling_rows.end());

    // Default smoothing keeps the zero-view post contributing.
    auto smoothed = build_content_submatrices(corpus, BuildOptions{});
    CHECK(smoothed.popularity_share.row_columns(tag_id(corpus, "a")).size() == 1);
}

TEST_CASE("zero-diagonal flag removes self pairs before normalization") {
    Corpus corpus = toy_corpus();
    BuildOptions opts{.k = 0.0, .literal_k = false, .zero_diagonal = true};
    auto variants = build_adjacency_variants(corpus, opts, all_variants());
    for (Variant v : all_variants()) {
        const SparseMatrix& m = variants.at(v).matrix;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            CHECK(m.at(i, static_cast<std::uint32_t>(i)) == 0.0);
        }
        CHECK(max_abs_diff(dense_variant(corpus, opts, v), m) < 1e-12);
    }
    // animal shares its post with nothing, so dropping the diagonal leaves
    // its row dangling.
    TagId animal = tag_id(corpus, "animal");
    const auto& dangling = variants.at(Variant::FP).dangling_rows;
    CHECK(std::find(dangling.begin(), dangling.end(), animal) != dangling.end());
}

TEST_CASE("toy ranking from user side differs from content side") {
    Corpus corpus = toy_corpus();
    auto variants = build_adjacency_variants(corpus, kNoSmoothing,
                                             std::array{Variant::FP, Variant::U});
    auto fp_ranking = rank_all(variants.at(Variant::FP));
    auto u_ranking = rank_all(variants.at(Variant::U));
    std::vector<TagId> fp_order;
    std::vector<TagId> u_order;
    for (const auto& item : fp_ranking) {
        fp_order.push_back(item.tag);
    }
    for (const auto& item : u_ranking) {
        u_order.push_back(item.tag);
    }
    CHECK(fp_order != u_order);
}
