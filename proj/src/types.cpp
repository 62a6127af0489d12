#include "qacg/types.hpp"

#include <algorithm>
#include <unordered_set>

#include "qacg/errors.hpp"
#include "qacg/replacement.hpp"

namespace qacg {

const Sentence* Article::find(int sid) const {
  if (sid < 0 || static_cast<std::size_t>(sid) >= sentences.size()) return nullptr;
  const Sentence& s = sentences[static_cast<std::size_t>(sid)];
  return s.sid == sid ? &s : nullptr;
}

LabelCounts ClaimDataset::counts() const {
  LabelCounts counts{};
  for (const auto& claim : claims) ++count_of(counts, claim.label);
  return counts;
}

void ClaimDataset::check_unique_ids() const {
  std::unordered_set<std::string> seen;
  for (const auto& claim : claims) {
    if (!seen.insert(claim.claim_id).second) {
      throw ConflictError("duplicate claim_id '" + claim.claim_id + "'");
    }
  }
}

std::optional<std::string> find_claim_violation(const GeneratedClaim& claim) {
  const Provenance& p = claim.provenance;
  const EvidencePassage& ev = claim.evidence;
  if (claim.text.empty()) return "empty claim text";
  if (p.question.empty()) return "empty question";
  switch (claim.label) {
    case Label::kSupported: {
      if (p.answer_origin != AnswerOrigin::kCore) return "supported answer not from passage";
      const auto& a = p.original_answer;
      if (a.char_end > ev.text.size() || a.char_start >= a.char_end ||
          ev.text.compare(a.char_start, a.char_end - a.char_start, a.surface) != 0) {
        return "supported answer span does not match passage text";
      }
      break;
    }
    case Label::kRefuted: {
      if (!p.replacement_answer) return "refuted claim without replacement";
      if (p.replacement_answer->etype != p.original_answer.etype) {
        return "replacement entity type differs from original";
      }
      if (overlaps(p.original_answer.surface, p.replacement_answer->surface)) {
        return "replacement fails the lexical overlap rule";
      }
      break;
    }
    case Label::kNei: {
      if (p.answer_origin != AnswerOrigin::kExtension) return "NEI answer not from extension";
      if (p.extension_sent_ids.empty()) return "NEI claim without extension sentences";
      for (int sid : p.extension_sent_ids) {
        if (std::find(ev.sent_ids.begin(), ev.sent_ids.end(), sid) != ev.sent_ids.end()) {
          return "extension sentence overlaps passage";
        }
      }
      if (!p.answer_sent_id ||
          std::find(p.extension_sent_ids.begin(), p.extension_sent_ids.end(),
                    *p.answer_sent_id) == p.extension_sent_ids.end()) {
        return "NEI answer sentence not among extension sentences";
      }
      break;
    }
  }
  return std::nullopt;
}

}  // namespace qacg
