#include "qacg/replacement.hpp"

#include <set>

#include "qacg/text.hpp"

namespace qacg {

bool overlaps(std::string_view original, std::string_view candidate) {
  const std::string a = casefold(trim(original));
  const std::string b = casefold(trim(candidate));
  if (a == b) return true;
  if (a.find(b) != std::string::npos || b.find(a) != std::string::npos) return true;

  const auto ta = word_tokens(a);
  const auto tb = word_tokens(b);
  const std::set<std::string> sa(ta.begin(), ta.end());
  const std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() || sb.empty()) return false;
  std::size_t shared = 0;
  for (const auto& t : sa) shared += sb.count(t);
  const std::size_t united = sa.size() + sb.size() - shared;
  return 2 * shared >= united;
}

}  // namespace qacg
