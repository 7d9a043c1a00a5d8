#include "tagrank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "tagrank/errors.hpp"
#include "tagrank/util.hpp"

namespace tagrank {

std::string normalize_tag(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (begin < end && is_space(static_cast<unsigned char>(raw[begin]))) {
        ++begin;
    }
    while (end > begin && is_space(static_cast<unsigned char>(raw[end - 1]))) {
        --end;
    }
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
    }
    return out;
}

TagId Vocabulary::intern(std::string_view normalized_tag) {
    auto it = ids_.find(std::string(normalized_tag));
    if (it != ids_.end()) {
        return it->second;
    }
    TagId id = static_cast<TagId>(names_.size());
    names_.emplace_back(normalized_tag);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<TagId> Vocabulary::find(std::string_view normalized_tag) const {
    auto it = ids_.find(std::string(normalized_tag));
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::string& Vocabulary::name(TagId id) const {
    if (id >= names_.size()) {
        throw NotFoundError("unknown tag index " + std::to_string(id));
    }
    return names_[id];
}

const User* Corpus::find_user(std::string_view user_id) const {
    auto it = user_index.find(std::string(user_id));
    if (it == user_index.end()) {
        return nullptr;
    }
    return &users[it->second];
}

void CorpusBuilder::add_post(std::string post_id, std::string user_id, std::uint64_t views,
                             std::span<const std::string> raw_tags, std::size_t line) {
    if (!seen_post_ids_.emplace(post_id, corpus_.posts.size()).second) {
        throw DataError("duplicate post id '" + post_id + "'", line);
    }
    if (raw_tags.empty()) {
        throw DataError("empty tag list", line);
    }

    Post post;
    post.id = std::move(post_id);
    post.user_id = user_id;
    post.views = views;
    std::unordered_set<TagId> seen_tags;
    for (const std::string& raw : raw_tags) {
        std::string tag = normalize_tag(raw);
        if (tag.empty()) {
            throw DataError("empty tag", line);
        }
        if (tag.find(',') != std::string::npos) {
            // Commas separate tags in the external format, so they cannot
            // appear inside one.
            throw DataError("tag '" + tag + "' contains a comma", line);
        }
        TagId id = corpus_.vocabulary.intern(tag);
        if (!seen_tags.insert(id).second) {
            ++corpus_.ingest_stats.duplicate_tags_collapsed;
            continue;
        }
        post.tags.push_back(id);
    }

    auto [it, inserted] =
        corpus_.user_index.emplace(user_id, static_cast<std::uint32_t>(corpus_.users.size()));
    if (inserted) {
        User fresh;
        fresh.id = std::move(user_id);
        corpus_.users.push_back(std::move(fresh));
    }
    User& user = corpus_.users[it->second];
    user.views += post.views;
    for (TagId t : post.tags) {
        ++user.tag_usage[t];
    }
    user.total_usage += post.tags.size();

    corpus_.posts.push_back(std::move(post));
}

Corpus CorpusBuilder::take() {
    seen_post_ids_.clear();
    return std::move(corpus_);
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_views(std::string_view field, std::uint64_t& out) {
    if (field.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

// A signed or overflowing integer is a malformed record, not a header.
bool looks_numeric(std::string_view field) {
    std::size_t start = (field.starts_with("+") || field.starts_with("-")) ? 1 : 0;
    if (start == field.size()) {
        return false;
    }
    for (std::size_t i = start; i < field.size(); ++i) {
        if (field[i] < '0' || field[i] > '9') {
            return false;
        }
    }
    return true;
}

} // namespace

Corpus ingest(std::istream& in) {
    CorpusBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        builder.stats().lines_read = line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 4) {
            throw DataError("expected 4 tab-separated columns, got " +
                                std::to_string(fields.size()),
                            line_no);
        }
        std::uint64_t views = 0;
        if (!parse_views(fields[2], views)) {
            if (first_record && !looks_numeric(fields[2])) {
                // Header line: third column is not a non-negative integer.
                builder.stats().header_skipped = true;
                first_record = false;
                continue;
            }
            throw DataError("invalid view count '" + std::string(fields[2]) + "'", line_no);
        }
        first_record = false;
        std::vector<std::string> tags;
        for (std::string_view t : split(fields[3], ',')) {
            tags.emplace_back(t);
        }
        builder.add_post(std::string(fields[0]), std::string(fields[1]), views, tags, line_no);
    }
    return builder.take();
}

Corpus ingest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open corpus file '" + path + "'");
    }
    return ingest(in);
}

void write_tsv(const Corpus& corpus, std::ostream& out) {
    for (const Post& post : corpus.posts) {
        out << post.id << '\t' << post.user_id << '\t' << post.views << '\t';
        for (std::size_t i = 0; i < post.tags.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << corpus.vocabulary.name(post.tags[i]);
        }
        out << '\n';
    }
}

CorpusStats compute_stats(const Corpus& corpus) {
    CorpusStats stats;
    stats.tag_count = corpus.tag_count();
    stats.post_count = corpus.post_count();
    stats.user_count = corpus.user_count();
    if (stats.post_count > 0) {
        double attachments = 0.0;
        double views = 0.0;
        for (const Post& p : corpus.posts) {
            attachments += static_cast<double>(p.tags.size());
            views += static_cast<double>(p.views);
        }
        stats.mean_tags_per_post = attachments / static_cast<double>(stats.post_count);
        stats.mean_views_per_post = views / static_cast<double>(stats.post_count);
    }
    if (stats.user_count > 0) {
        stats.mean_posts_per_user =
            static_cast<double>(stats.post_count) / static_cast<double>(stats.user_count);
        double user_views = 0.0;
        for (const User& u : corpus.users) {
            user_views += static_cast<double>(u.views);
        }
        stats.mean_views_per_user = user_views / static_cast<double>(stats.user_count);
    }
    return stats;
}

std::size_t ValidationReport::count(Violation::Kind kind) const {
    std::size_t n = 0;
    for (const Violation& v : violations) {
        if (v.kind == kind) {
            ++n;
        }
    }
    return n;
}

ValidationReport validate(const Corpus& corpus) {
    ValidationReport report;
    auto flag = [&report](Violation::Kind kind, std::string detail) {
        report.violations.push_back(Violation{kind, std::move(detail)});
    };

    std::unordered_set<std::string_view> post_ids;
    std::unordered_map<std::string_view, User> recomputed;
    for (const Post& post : corpus.posts) {
        if (!post_ids.insert(post.id).second) {
            flag(Violation::Kind::DuplicatePostId, "post '" + post.id + "'");
        }
        if (post.tags.empty()) {
            flag(Violation::Kind::EmptyTagList, "post '" + post.id + "'");
        }
        std::unordered_set<TagId> seen;
        for (TagId t : post.tags) {
            if (t >= corpus.tag_count()) {
                flag(Violation::Kind::TagIndexOutOfRange,
                     "post '" + post.id + "' tag index " + std::to_string(t));
            }
            if (!seen.insert(t).second) {
                flag(Violation::Kind::DuplicateTagInPost,
                     "post '" + post.id + "' tag index " + std::to_string(t));
            }
        }
        if (corpus.find_user(post.user_id) == nullptr) {
            flag(Violation::Kind::DanglingUser,
                 "post '" + post.id + "' references user '" + post.user_id + "'");
        }
        User& agg = recomputed[post.user_id];
        agg.views += post.views;
        for (TagId t : post.tags) {
            ++agg.tag_usage[t];
        }
        agg.total_usage += post.tags.size();
    }

    for (const User& user : corpus.users) {
        auto it = recomputed.find(user.id);
        const bool has_posts = it != recomputed.end();
        const User empty{};
        const User& agg = has_posts ? it->second : empty;
        if (user.views != agg.views || user.tag_usage != agg.tag_usage ||
            user.total_usage != agg.total_usage) {
            flag(Violation::Kind::UserAggregateMismatch, "user '" + user.id + "'");
        }
    }

    report.stats = compute_stats(corpus);
    return report;
}

std::uint64_t user_popularity(const Corpus& corpus, std::string_view user_id) {
    const User* user = corpus.find_user(user_id);
    if (user == nullptr) {
        throw NotFoundError("unknown user '" + std::string(user_id) + "'");
    }
    return user->views;
}

namespace {

std::string padded_name(const char* prefix, std::size_t value, int width) {
    std::string digits = std::to_string(value);
    std::string out(prefix);
    for (int i = static_cast<int>(digits.size()); i < width; ++i) {
        out.push_back('0');
    }
    out += digits;
    return out;
}

} // namespace

Corpus generate_synthetic_corpus(const SyntheticSpec& spec) {
    if (spec.posts == 0 || spec.users == 0 || spec.tags == 0) {
        throw ConfigError("synthetic corpus needs at least one post, user, and tag");
    }
    if (spec.min_tags_per_post == 0 || spec.min_tags_per_post > spec.max_tags_per_post) {
        throw ConfigError("invalid tags-per-post range");
    }
    SplitMix64 rng(spec.seed);
    CorpusBuilder builder;

    // Skewed tag draw: cubing the uniform variate concentrates picks on the
    // low indices so head tags co-occur broadly, as in real folksonomies.
    auto draw_tag = [&rng, &spec]() {
        double u = rng.unit();
        auto idx = static_cast<std::size_t>(u * u * u * static_cast<double>(spec.tags));
        return std::min(idx, spec.tags - 1);
    };
    auto heavy_tail_views = [&rng]() {
        std::uint64_t views = rng.below(200);
        if (rng.below(20) == 0) {
            views += 1000 + rng.below(20000);
        }
        if (rng.below(400) == 0) {
            views += 100000 + rng.below(400000);
        }
        return views;
    };

    const std::uint32_t tag_span = spec.max_tags_per_post - spec.min_tags_per_post + 1;
    for (std::size_t p = 0; p < spec.posts; ++p) {
        // Round-robin floors guarantee the exact user and tag counts.
        std::size_t user = p % spec.users;
        std::vector<std::string> tags;
        for (std::size_t t = p; t < spec.tags; t += spec.posts) {
            tags.push_back(padded_name("t", t, 5));
        }
        std::uint32_t want = spec.min_tags_per_post + static_cast<std::uint32_t>(rng.below(tag_span));
        while (tags.size() < want) {
            tags.push_back(padded_name("t", draw_tag(), 5));
        }
        builder.add_post(padded_name("p", p, 6), padded_name("u", user, 4), heavy_tail_views(),
                         tags);
    }
    return builder.take();
}

} // namespace tagrank
