#include "support/fixtures.hpp"

#include <stdexcept>

namespace tagrank::testing {

Corpus make_corpus(const std::vector<PostRecord>& records) {
    CorpusBuilder builder;
    for (const PostRecord& r : records) {
        builder.add_post(r.post_id, r.user_id, r.views, r.tags);
    }
    return builder.take();
}

Corpus toy_corpus() {
    return make_corpus({
        {"#1", "Q", 15, {"building", "nature"}},
        {"#2", "Q", 30, {"outdoor", "nature"}},
        {"#3", "R", 5, {"building"}},
        {"#4", "S", 15, {"animal"}},
    });
}

std::string toy_tsv() {
    return "#1\tQ\t15\tbuilding,nature\n"
           "#2\tQ\t30\toutdoor,nature\n"
           "#3\tR\t5\tbuilding\n"
           "#4\tS\t15\tanimal\n";
}

Corpus disjoint_corpus() {
    return make_corpus({
        {"p1", "u1", 10, {"a", "b"}},
        {"p2", "u1", 20, {"b"}},
        {"p3", "u2", 30, {"x", "y"}},
        {"p4", "u2", 5, {"y"}},
    });
}

Corpus ridge_corpus() {
    return make_corpus({
        {"h1", "u1", 1000, {"base", "hot"}},
        {"h2", "u1", 800, {"base", "hot"}},
        {"h3", "u2", 900, {"base", "hot"}},
        {"c1", "u2", 1, {"base", "cold"}},
        {"c2", "u3", 2, {"base", "cold"}},
        {"c3", "u3", 1, {"base", "cold"}},
    });
}

TagId tag_id(const Corpus& corpus, const std::string& name) {
    auto id = corpus.vocabulary.find(normalize_tag(name));
    if (!id) {
        throw std::runtime_error("fixture tag not found: " + name);
    }
    return *id;
}

} // namespace tagrank::testing
