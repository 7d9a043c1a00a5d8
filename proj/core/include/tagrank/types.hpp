#pragma once

#include <cstdint>
#include <vector>

namespace tagrank {

/// Dense tag index in [0, T).
using TagId = std::uint32_t;

struct ScoredTag {
    TagId tag = 0;
    double score = 0.0;

    friend bool operator==(const ScoredTag&, const ScoredTag&) = default;
};

using ScoredTagList = std::vector<ScoredTag>;

} // namespace tagrank
