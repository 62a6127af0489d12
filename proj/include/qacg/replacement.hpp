#pragma once

#include <string_view>

namespace qacg {

/// Lexical overlap rule for answer replacement. After ASCII case folding a
/// candidate overlaps the original if the two are equal, either contains the
/// other, or the Jaccard similarity of their word-token sets is >= 0.5.
bool overlaps(std::string_view original, std::string_view candidate);

}  // namespace qacg
