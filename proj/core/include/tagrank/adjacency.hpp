#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tagrank/corpus.hpp"
#include "tagrank/sparse.hpp"

namespace tagrank {

/// The adjacency-matrix family. FP weights tag co-occurrence by content
/// popularity, U by user popularity; the two UFP modes combine both by
/// entrywise addition or multiplication of the row-normalized FP and U
/// matrices.
enum class Variant {
    FP,
    U,
    UFP_PLUS,
    UFP_PRODUCT,
};

std::string_view to_string(Variant v);
std::optional<Variant> variant_from_string(std::string_view name);

/// All four variants, in stored order.
std::span<const Variant> all_variants();

struct BuildOptions {
    /// Additive smoothing keeping zero-popularity posts/users contributing.
    double k = 1.0;
    /// When set, k is added in numerators only; popularity-share rows are then
    /// no longer exactly stochastic and zero-popularity rows go dangling.
    bool literal_k = false;
    /// When set, (i, i) entries are dropped before row normalization.
    bool zero_diagonal = false;
};

/// A pair of T x I (or T x N) matrices from which one adjacency side is
/// assembled:
///   popularity_share: row i distributes mass over the posts (users) carrying
///                     tag i, proportional to smoothed popularity; rows sum
///                     to 1 unless literal_k or an all-zero denominator.
///   usage_fraction:   column d (l) splits the post's unit over its tags
///                     (the user's unit over tag usage counts); columns sum
///                     to 1.
struct Submatrices {
    SparseMatrix popularity_share;
    SparseMatrix usage_fraction;
};

Submatrices build_content_submatrices(const Corpus& corpus, const BuildOptions& opts = {});
Submatrices build_user_submatrices(const Corpus& corpus, const BuildOptions& opts = {});

/// T x T row-normalized tag adjacency. Rows with at least one entry sum to
/// 1 +- 1e-12 (checked); all-zero rows are listed in dangling_rows.
struct AdjacencyMatrix {
    SparseMatrix matrix;
    Variant variant = Variant::FP;
    double smoothing_k = 1.0;
    std::vector<std::uint32_t> dangling_rows;
};

/// popularity_share * usage_fraction^T, optional diagonal drop, then row
/// normalization. Throws DataError on mismatched dimensions.
AdjacencyMatrix assemble_content_adjacency(const Submatrices& content,
                                           const BuildOptions& opts = {});
AdjacencyMatrix assemble_user_adjacency(const Submatrices& user, const BuildOptions& opts = {});

/// Combines the two assembled sides. U returns the user side unchanged;
/// UFP_PLUS re-normalizes the entrywise sum; UFP_PRODUCT re-normalizes the
/// entrywise product, whose support is the intersection of the two supports.
AdjacencyMatrix combine(const AdjacencyMatrix& content, const AdjacencyMatrix& user,
                        Variant mode);

/// Builds the requested variants from one corpus, sharing submatrix work.
std::map<Variant, AdjacencyMatrix> build_adjacency_variants(
    const Corpus& corpus, const BuildOptions& opts, std::span<const Variant> requested);

} // namespace tagrank
