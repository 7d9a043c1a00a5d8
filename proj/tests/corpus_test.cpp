#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "tagrank/corpus.hpp"
#include "tagrank/errors.hpp"

using namespace tagrank;
using namespace tagrank::testing;

TEST_CASE("ingest parses the four-post example") {
    std::istringstream in(toy_tsv());
    Corpus corpus = ingest(in);

    CHECK(corpus.tag_count() == 4);
    CHECK(corpus.post_count() == 4);
    CHECK(corpus.user_count() == 3);
    CHECK(user_popularity(corpus, "Q") == 45);
    CHECK(user_popularity(corpus, "R") == 5);
    CHECK(user_popularity(corpus, "S") == 15);

    // Vocabulary indices follow first appearance.
    CHECK(tag_id(corpus, "building") == 0);
    CHECK(tag_id(corpus, "nature") == 1);
    CHECK(tag_id(corpus, "outdoor") == 2);
    CHECK(tag_id(corpus, "animal") == 3);

    const User& q = *corpus.find_user("Q");
    CHECK(q.total_usage == 4);
    CHECK(q.tag_usage.at(tag_id(corpus, "nature")) == 2);
    CHECK(q.tag_usage.at(tag_id(corpus, "building")) == 1);
}

TEST_CASE("ingest minimal corpus") {
    std::istringstream in("p1\tu1\t0\ta\n");
    Corpus corpus = ingest(in);
    CHECK(corpus.tag_count() == 1);
    CHECK(corpus.post_count() == 1);
    CHECK(user_popularity(corpus, "u1") == 0);
}

TEST_CASE("ingest rejects malformed records with line numbers") {
    SUBCASE("negative views") {
        std::istringstream in("p1\tu1\t5\ta\np2\tu1\t-3\tb\n");
        CHECK_THROWS_WITH_AS(ingest(in), doctest::Contains("line 2"), DataError);
    }
    SUBCASE("negative views on the first line are not mistaken for a header") {
        std::istringstream in("p1\tu1\t-3\ta\n");
        CHECK_THROWS_WITH_AS(ingest(in), doctest::Contains("line 1"), DataError);
    }
    SUBCASE("wrong column count") {
        std::istringstream in("p1\tu1\t5\n");
        try {
            ingest(in);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("empty tag list") {
        std::istringstream in("p1\tu1\t5\t\n");
        CHECK_THROWS_AS(ingest(in), DataError);
    }
    SUBCASE("duplicate post id") {
        std::istringstream in("p1\tu1\t5\ta\np1\tu2\t6\tb\n");
        CHECK_THROWS_WITH_AS(ingest(in), doctest::Contains("duplicate post id"), DataError);
    }
}

TEST_CASE("ingest detects an optional header line") {
    std::istringstream in("post_id\tuser_id\tviews\ttags\np1\tu1\t7\ta,b\n");
    Corpus corpus = ingest(in);
    CHECK(corpus.ingest_stats.header_skipped);
    CHECK(corpus.post_count() == 1);

    // A non-numeric views column after the first record is still an error.
    std::istringstream bad("p1\tu1\t7\ta\np2\tu1\tmany\tb\n");
    CHECK_THROWS_AS(ingest(bad), DataError);
}

TEST_CASE("duplicate tags within a record are collapsed and counted") {
    std::istringstream in("p1\tu1\t5\ta,b,a,  A \n");
    Corpus corpus = ingest(in);
    CHECK(corpus.posts[0].tags.size() == 2);
    CHECK(corpus.ingest_stats.duplicate_tags_collapsed == 2);
    // The user's usage still counts once per post.
    CHECK(corpus.users[0].tag_usage.at(tag_id(corpus, "a")) == 1);
}

TEST_CASE("programmatic tags cannot smuggle the list separator") {
    CorpusBuilder builder;
    std::vector<std::string> tags = {"a,b"};
    CHECK_THROWS_AS(builder.add_post("p1", "u1", 1, tags), DataError);
}

TEST_CASE("tags are trimmed and lowercased") {
    std::istringstream in("p1\tu1\t5\t Nature ,BUILDING\n");
    Corpus corpus = ingest(in);
    CHECK(corpus.vocabulary.find("nature").has_value());
    CHECK(corpus.vocabulary.find("building").has_value());
    CHECK_FALSE(corpus.vocabulary.find("Nature").has_value());
}

TEST_CASE("validate reports clean toy corpus and its statistics") {
    ValidationReport report = validate(toy_corpus());
    CHECK(report.ok());
    CHECK(report.stats.tag_count == 4);
    CHECK(report.stats.post_count == 4);
    CHECK(report.stats.user_count == 3);
    CHECK(report.stats.mean_tags_per_post == doctest::Approx(1.5));
    CHECK(report.stats.mean_views_per_post == doctest::Approx(65.0 / 4.0));
}

TEST_CASE("validate flags a dangling user reference") {
    Corpus corpus = toy_corpus();
    corpus.posts[0].user_id = "ghost";
    ValidationReport report = validate(corpus);
    CHECK(report.count(Violation::Kind::DanglingUser) == 1);
    // Q's stored aggregates no longer match its remaining posts either.
    CHECK(report.count(Violation::Kind::UserAggregateMismatch) == 1);
}

TEST_CASE("validate flags aggregate mismatches") {
    Corpus corpus = toy_corpus();
    corpus.users[0].views += 1;
    ValidationReport report = validate(corpus);
    CHECK(report.count(Violation::Kind::UserAggregateMismatch) == 1);
}

TEST_CASE("validate on an empty corpus") {
    Corpus corpus;
    ValidationReport report = validate(corpus);
    CHECK(report.ok());
    CHECK(report.stats.tag_count == 0);
    CHECK(report.stats.post_count == 0);
}

TEST_CASE("user_popularity errors on unknown users") {
    CHECK_THROWS_AS(user_popularity(toy_corpus(), "nobody"), NotFoundError);
}

TEST_CASE("corpus round-trips through the external format") {
    TestRng rng(42);
    for (int i = 0; i < 25; ++i) {
        Corpus corpus = random_corpus(rng);
        std::ostringstream out;
        write_tsv(corpus, out);
        std::istringstream in(out.str());
        Corpus reread = ingest(in);
        CHECK(reread == corpus);
    }
}

TEST_CASE("user and post popularity totals agree") {
    TestRng rng(7);
    for (int i = 0; i < 25; ++i) {
        Corpus corpus = random_corpus(rng);
        std::uint64_t post_total = 0;
        for (const Post& p : corpus.posts) {
            post_total += p.views;
        }
        std::uint64_t user_total = 0;
        for (const User& u : corpus.users) {
            user_total += u.views;
        }
        CHECK(post_total == user_total);

        for (const User& u : corpus.users) {
            std::uint64_t usage = 0;
            std::size_t own_posts = 0;
            for (const Post& p : corpus.posts) {
                own_posts += (p.user_id == u.id) ? 1 : 0;
            }
            for (const auto& [tag, count] : u.tag_usage) {
                (void)tag;
                usage += count;
            }
            CHECK(usage == u.total_usage);
            CHECK(u.total_usage >= own_posts);
        }
    }
}

TEST_CASE("synthetic corpus hits its scale targets exactly") {
    SyntheticSpec spec;
    spec.posts = 300;
    spec.users = 40;
    spec.tags = 500;
    spec.seed = 3;
    Corpus corpus = generate_synthetic_corpus(spec);
    CHECK(corpus.post_count() == 300);
    CHECK(corpus.user_count() == 40);
    CHECK(corpus.tag_count() == 500);
    CHECK(validate(corpus).ok());

    // Deterministic given the seed.
    Corpus again = generate_synthetic_corpus(spec);
    CHECK(again == corpus);
}
