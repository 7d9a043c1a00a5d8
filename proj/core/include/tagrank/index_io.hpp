#pragma once

#include <map>
#include <string>
#include <vector>

#include "tagrank/adjacency.hpp"
#include "tagrank/corpus.hpp"

namespace tagrank {

/// Everything a query needs, persisted as one file: the source corpus
/// (users are re-derived from posts on load), the build options, the
/// assembled adjacency variants, and the trained per-tag regression weights.
struct TagIndex {
    BuildOptions options;
    double ridge_lambda = 1.0;
    Corpus corpus;
    std::map<Variant, AdjacencyMatrix> matrices;
    std::vector<double> tag_weights; // empty when not trained

    const AdjacencyMatrix& require_variant(Variant v) const;
};

/// Ingested corpus -> fully built index (requested variants + weights).
TagIndex build_tag_index(Corpus corpus, const BuildOptions& opts,
                         std::span<const Variant> requested, double ridge_lambda = 1.0);

/// Binary container with a magic tag, format version, and an FNV-1a
/// checksum over the payload. Round-trips losslessly (doubles are stored as
/// IEEE-754 bit patterns); loading refuses unknown versions and corrupt
/// payloads with IoError.
void save_index(const TagIndex& index, const std::string& path);
TagIndex load_index(const std::string& path);

} // namespace tagrank
