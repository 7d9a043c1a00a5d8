#include "tagrank/index_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "tagrank/baselines.hpp"
#include "tagrank/errors.hpp"

namespace tagrank {

namespace {

constexpr char kMagic[8] = {'T', 'A', 'G', 'R', 'I', 'D', 'X', '\n'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

class Writer {
public:
    void u8(std::uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            buffer_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            buffer_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
        }
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buffer_.append(s);
    }
    void matrix(const SparseMatrix& m) {
        u64(m.rows());
        u64(m.cols());
        u64(m.entry_count());
        for (std::size_t o : m.offsets()) {
            u64(o);
        }
        for (std::uint32_t c : m.columns()) {
            u32(c);
        }
        for (double v : m.values()) {
            f64(v);
        }
    }
    const std::string& bytes() const { return buffer_; }

private:
    std::string buffer_;
};

class Reader {
public:
    explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint32_t u32() {
        const char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        }
        return v;
    }
    std::uint64_t u64() {
        const char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        }
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        std::uint32_t len = u32();
        const char* p = take(len);
        return std::string(p, len);
    }
    SparseMatrix matrix() {
        std::uint64_t rows = u64();
        std::uint64_t cols = u64();
        std::uint64_t nnz = u64();
        std::vector<std::size_t> offsets(rows + 1);
        for (auto& o : offsets) {
            o = u64();
        }
        std::vector<std::uint32_t> columns(nnz);
        for (auto& c : columns) {
            c = u32();
        }
        std::vector<double> values(nnz);
        for (auto& v : values) {
            v = f64();
        }
        return SparseMatrix(rows, cols, std::move(offsets), std::move(columns),
                            std::move(values));
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    const char* take(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw IoError("index file truncated");
        }
        const char* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    std::string bytes_;
    std::size_t pos_ = 0;
};

} // namespace

const AdjacencyMatrix& TagIndex::require_variant(Variant v) const {
    auto it = matrices.find(v);
    if (it == matrices.end()) {
        throw DataError("index does not contain variant '" + std::string(to_string(v)) + "'");
    }
    return it->second;
}

TagIndex build_tag_index(Corpus corpus, const BuildOptions& opts,
                         std::span<const Variant> requested, double ridge_lambda) {
    TagIndex index;
    index.options = opts;
    index.ridge_lambda = ridge_lambda;
    index.matrices = build_adjacency_variants(corpus, opts, requested);
    index.tag_weights =
        corpus.post_count() >= 2 ? train_tag_weights(corpus, ridge_lambda) : std::vector<double>{};
    index.corpus = std::move(corpus);
    return index;
}

void save_index(const TagIndex& index, const std::string& path) {
    Writer payload;
    payload.f64(index.options.k);
    payload.u8(index.options.literal_k ? 1 : 0);
    payload.u8(index.options.zero_diagonal ? 1 : 0);
    payload.f64(index.ridge_lambda);

    const Corpus& corpus = index.corpus;
    payload.u32(static_cast<std::uint32_t>(corpus.tag_count()));
    for (const std::string& name : corpus.vocabulary.names()) {
        payload.str(name);
    }
    payload.u32(static_cast<std::uint32_t>(corpus.post_count()));
    for (const Post& post : corpus.posts) {
        payload.str(post.id);
        payload.str(post.user_id);
        payload.u64(post.views);
        payload.u32(static_cast<std::uint32_t>(post.tags.size()));
        for (TagId t : post.tags) {
            payload.u32(t);
        }
    }

    payload.u32(static_cast<std::uint32_t>(index.matrices.size()));
    for (const auto& [variant, adjacency] : index.matrices) {
        payload.u8(static_cast<std::uint8_t>(variant));
        payload.f64(adjacency.smoothing_k);
        payload.matrix(adjacency.matrix);
        payload.u32(static_cast<std::uint32_t>(adjacency.dangling_rows.size()));
        for (std::uint32_t row : adjacency.dangling_rows) {
            payload.u32(row);
        }
    }

    payload.u8(index.tag_weights.empty() ? 0 : 1);
    if (!index.tag_weights.empty()) {
        payload.u32(static_cast<std::uint32_t>(index.tag_weights.size()));
        for (double w : index.tag_weights) {
            payload.f64(w);
        }
    }

    Writer header;
    header.u32(kFormatVersion);
    header.u64(payload.bytes().size());
    header.u64(fnv1a(payload.bytes()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open index file '" + path + "' for writing");
    }
    out.write(kMagic, sizeof(kMagic));
    out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
    out.write(payload.bytes().data(), static_cast<std::streamsize>(payload.bytes().size()));
    if (!out) {
        throw IoError("failed writing index file '" + path + "'");
    }
}

TagIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open index file '" + path + "'");
    }
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (contents.size() < sizeof(kMagic) + 4 + 8 + 8 ||
        std::memcmp(contents.data(), kMagic, sizeof(kMagic)) != 0) {
        throw IoError("'" + path + "' is not a tag index file");
    }
    Reader header(contents.substr(sizeof(kMagic), 4 + 8 + 8));
    const std::uint32_t version = header.u32();
    if (version != kFormatVersion) {
        throw IoError("unsupported index version " + std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
    }
    const std::uint64_t payload_size = header.u64();
    const std::uint64_t checksum = header.u64();
    const std::size_t payload_start = sizeof(kMagic) + 4 + 8 + 8;
    if (contents.size() - payload_start != payload_size) {
        throw IoError("index payload size mismatch");
    }
    std::string payload_bytes = contents.substr(payload_start);
    if (fnv1a(payload_bytes) != checksum) {
        throw IoError("index checksum mismatch; file is corrupt");
    }

    Reader payload(std::move(payload_bytes));
    TagIndex index;
    index.options.k = payload.f64();
    index.options.literal_k = payload.u8() != 0;
    index.options.zero_diagonal = payload.u8() != 0;
    index.ridge_lambda = payload.f64();

    const std::uint32_t tag_count = payload.u32();
    std::vector<std::string> tag_names(tag_count);
    for (auto& name : tag_names) {
        name = payload.str();
    }

    // Users and aggregates are rebuilt from the stored posts; the builder
    // enforces the same consistency as ingestion.
    CorpusBuilder builder;
    const std::uint32_t post_count = payload.u32();
    for (std::uint32_t i = 0; i < post_count; ++i) {
        std::string id = payload.str();
        std::string user_id = payload.str();
        std::uint64_t views = payload.u64();
        std::uint32_t n_tags = payload.u32();
        std::vector<std::string> tags;
        tags.reserve(n_tags);
        for (std::uint32_t t = 0; t < n_tags; ++t) {
            std::uint32_t tag = payload.u32();
            if (tag >= tag_count) {
                throw IoError("index post references tag out of range");
            }
            tags.push_back(tag_names[tag]);
        }
        builder.add_post(std::move(id), std::move(user_id), views, tags);
    }
    index.corpus = builder.take();
    if (index.corpus.vocabulary.names() != tag_names) {
        // Tags unused by any post cannot be reconstructed through posts alone.
        for (const std::string& name : tag_names) {
            index.corpus.vocabulary.intern(name);
        }
        if (index.corpus.vocabulary.names() != tag_names) {
            throw IoError("index vocabulary order is inconsistent with posts");
        }
    }

    const std::uint32_t matrix_count = payload.u32();
    for (std::uint32_t i = 0; i < matrix_count; ++i) {
        const std::uint8_t variant_raw = payload.u8();
        if (variant_raw > static_cast<std::uint8_t>(Variant::UFP_PRODUCT)) {
            throw IoError("index contains unknown variant tag");
        }
        AdjacencyMatrix adjacency;
        adjacency.variant = static_cast<Variant>(variant_raw);
        adjacency.smoothing_k = payload.f64();
        adjacency.matrix = payload.matrix();
        const std::uint32_t dangling = payload.u32();
        adjacency.dangling_rows.resize(dangling);
        for (auto& row : adjacency.dangling_rows) {
            row = payload.u32();
        }
        index.matrices.emplace(adjacency.variant, std::move(adjacency));
    }

    if (payload.u8() != 0) {
        const std::uint32_t len = payload.u32();
        index.tag_weights.resize(len);
        for (auto& w : index.tag_weights) {
            w = payload.f64();
        }
    }
    if (!payload.exhausted()) {
        throw IoError("index file has trailing bytes");
    }
    return index;
}

} // namespace tagrank
