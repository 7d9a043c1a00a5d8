#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagrank/types.hpp"

namespace tagrank {

/// Trims ASCII whitespace and lowercases ASCII letters. Applied to every tag
/// before vocabulary insertion and to seed tags before lookup.
std::string normalize_tag(std::string_view raw);

/// Bijective tag string <-> dense index mapping; indices are contiguous from 0
/// in order of first appearance.
class Vocabulary {
public:
    TagId intern(std::string_view normalized_tag);
    std::optional<TagId> find(std::string_view normalized_tag) const;
    const std::string& name(TagId id) const;
    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    const std::vector<std::string>& names() const { return names_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, TagId> ids_;
};

struct Post {
    std::string id;
    std::string user_id;
    std::uint64_t views = 0;        // the post's social popularity
    std::vector<TagId> tags;        // deduplicated, first-appearance order

    friend bool operator==(const Post&, const Post&) = default;
};

struct User {
    std::string id;
    std::uint64_t views = 0;                    // sum of views over the user's posts
    std::map<TagId, std::uint32_t> tag_usage;   // posts of this user carrying each tag
    std::uint64_t total_usage = 0;              // sum of tag_usage counts

    friend bool operator==(const User&, const User&) = default;
};

struct IngestStats {
    std::size_t duplicate_tags_collapsed = 0;
    std::size_t lines_read = 0;
    bool header_skipped = false;

    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Immutable after construction; safe for concurrent reads.
struct Corpus {
    std::vector<Post> posts;
    std::vector<User> users;                              // first-appearance order
    std::unordered_map<std::string, std::uint32_t> user_index; // user id -> users position
    Vocabulary vocabulary;
    IngestStats ingest_stats;

    std::size_t tag_count() const { return vocabulary.size(); }
    std::size_t post_count() const { return posts.size(); }
    std::size_t user_count() const { return users.size(); }
    const User* find_user(std::string_view user_id) const;

    friend bool operator==(const Corpus& a, const Corpus& b) {
        return a.posts == b.posts && a.users == b.users && a.vocabulary == b.vocabulary;
    }
};

/// Incremental corpus assembly shared by the stream ingester and the
/// synthetic generator; keeps user aggregates consistent with posts by
/// construction.
class CorpusBuilder {
public:
    /// Adds one post. Raw tags are normalized and deduplicated; duplicate
    /// post ids or an empty usable tag list throw DataError (with the given
    /// line number when > 0).
    void add_post(std::string post_id, std::string user_id, std::uint64_t views,
                  std::span<const std::string> raw_tags, std::size_t line = 0);

    IngestStats& stats() { return corpus_.ingest_stats; }
    Corpus take();

private:
    Corpus corpus_;
    std::unordered_map<std::string, std::size_t> seen_post_ids_;
};

/// Reads the tab-separated external format, one post per line:
///   post_id \t user_id \t views \t tag1,tag2,...
/// An optional header line is detected by a non-numeric third column. Views
/// is a base-10 non-negative integer. Malformed records throw DataError
/// carrying the 1-based line number.
Corpus ingest(std::istream& in);
Corpus ingest_file(const std::string& path);

/// Writes the same external format; ingest(write_tsv(c)) == c.
void write_tsv(const Corpus& corpus, std::ostream& out);

struct CorpusStats {
    std::size_t tag_count = 0;
    std::size_t post_count = 0;
    std::size_t user_count = 0;
    double mean_tags_per_post = 0.0;
    double mean_views_per_post = 0.0;
    double mean_posts_per_user = 0.0;
    double mean_views_per_user = 0.0;
};

CorpusStats compute_stats(const Corpus& corpus);

struct Violation {
    enum class Kind {
        DanglingUser,          // post's user_id not present in users
        UserAggregateMismatch, // stored user totals differ from recomputed ones
        TagIndexOutOfRange,
        EmptyTagList,
        DuplicateTagInPost,
        DuplicatePostId,
    };
    Kind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    CorpusStats stats;

    bool ok() const { return violations.empty(); }
    std::size_t count(Violation::Kind kind) const;
};

/// Report-only invariant check; never throws on bad data.
ValidationReport validate(const Corpus& corpus);

/// Sum of views over the user's posts; throws NotFoundError for unknown ids.
std::uint64_t user_popularity(const Corpus& corpus, std::string_view user_id);

/// Scale targets for generated corpora. Defaults approximate the shape of a
/// large photo-sharing crawl scaled down to desk size: heavy-tailed views,
/// skewed tag frequencies, every tag and user guaranteed to occur.
struct SyntheticSpec {
    std::size_t posts = 10000;
    std::size_t users = 2000;
    std::size_t tags = 20000;
    std::uint32_t min_tags_per_post = 3;
    std::uint32_t max_tags_per_post = 21;
    std::uint64_t seed = 1;
};

Corpus generate_synthetic_corpus(const SyntheticSpec& spec);

} // namespace tagrank
