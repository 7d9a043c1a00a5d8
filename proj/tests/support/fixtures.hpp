#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tagrank/corpus.hpp"

namespace tagrank::testing {

struct PostRecord {
    std::string post_id;
    std::string user_id;
    std::uint64_t views = 0;
    std::vector<std::string> tags;
};

Corpus make_corpus(const std::vector<PostRecord>& records);

/// The worked four-post example: Q uploads #1{building,nature} with 15 views
/// and #2{outdoor,nature} with 30, R uploads #3{building} with 5, S uploads
/// #4{animal} with 15. Vocabulary order: building, nature, outdoor, animal.
Corpus toy_corpus();
std::string toy_tsv();

/// Two components with no shared post or user: {a, b} vs {x, y}.
Corpus disjoint_corpus();

/// Six posts where tag "hot" appears exactly on the three high-view posts
/// and tag "cold" exactly on the three low-view posts; "base" is everywhere.
Corpus ridge_corpus();

TagId tag_id(const Corpus& corpus, const std::string& name);

} // namespace tagrank::testing
