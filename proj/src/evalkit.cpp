#include "qacg/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "qacg/errors.hpp"
#include "qacg/rng.hpp"

namespace qacg {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::size_t label_index(LabelSpace space, Label label) {
  const auto labels = labels_of(space);
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw DataError("label " + std::string(to_string(label)) + " is outside label space " +
                    std::string(to_string(space)));
  }
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

const ClassMetrics& EvalReport::of(Label label) const {
  return per_class.at(label_index(space, label));
}

EvalReport macro_prf(std::span<const Label> gold, std::span<const Label> pred,
                     std::optional<LabelSpace> space) {
  if (gold.size() != pred.size()) {
    throw DataError("macro_prf: " + std::to_string(gold.size()) + " gold labels but " +
                    std::to_string(pred.size()) + " predictions");
  }
  if (gold.empty()) throw DataError("macro_prf: no labels");
  if (!space) {
    const bool has_nei = std::find(gold.begin(), gold.end(), Label::kNei) != gold.end() ||
                         std::find(pred.begin(), pred.end(), Label::kNei) != pred.end();
    space = has_nei ? LabelSpace::kSRN : LabelSpace::kSR;
  }

  EvalReport report;
  report.space = *space;
  report.n = gold.size();
  const std::size_t k = num_classes(*space);
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++report.confusion[label_index(*space, gold[i])][label_index(*space, pred[i])];
  }

  report.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += report.confusion[o][c];
      actual += report.confusion[c][o];
    }
    auto& m = report.per_class[c];
    m.precision = ratio(report.confusion[c][c], predicted);
    m.recall = ratio(report.confusion[c][c], actual);
    m.f1 = harmonic(m.precision, m.recall);
    report.macro.precision += m.precision / static_cast<double>(k);
    report.macro.recall += m.recall / static_cast<double>(k);
    report.macro.f1 += m.f1 / static_cast<double>(k);
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["label_space"] = to_string(report.space);
  j["n"] = report.n;
  const auto labels = labels_of(report.space);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const auto& m = report.per_class[c];
    j["per_class"][std::string(to_string(labels[c]))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  }
  j["macro"] = {{"precision", report.macro.precision},
                {"recall", report.macro.recall},
                {"f1", report.macro.f1}};
  j["confusion"] = report.confusion;
  return j.dump(2);
}

std::string format_report_row(std::string_view name, const EvalReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-28.*s %4.1f / %4.1f / %4.1f", static_cast<int>(name.size()),
                name.data(), 100.0 * report.macro.precision, 100.0 * report.macro.recall,
                100.0 * report.macro.f1);
  return buf;
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-10s %9s %9s %9s\n", "class", "precision", "recall", "f1");
  out << buf;
  const auto labels = labels_of(report.space);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const auto& m = report.per_class[c];
    std::snprintf(buf, sizeof(buf), "%-10s %9.4f %9.4f %9.4f\n",
                  std::string(to_string(labels[c])).c_str(), m.precision, m.recall, m.f1);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-10s %9.4f %9.4f %9.4f\n", "macro", report.macro.precision,
                report.macro.recall, report.macro.f1);
  out << buf << "n = " << report.n << "\nconfusion (rows gold, columns predicted):\n";
  for (std::size_t g = 0; g < labels.size(); ++g) {
    std::snprintf(buf, sizeof(buf), "%-10s", std::string(to_string(labels[g])).c_str());
    out << buf;
    for (std::size_t p = 0; p < labels.size(); ++p) {
      std::snprintf(buf, sizeof(buf), " %9zu", report.confusion[g][p]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

double bleu4(std::span<const Tokens> candidates, std::span<const Tokens> references) {
  if (candidates.empty()) throw DataError("bleu4: empty candidate corpus");
  if (candidates.size() != references.size()) {
    throw DataError("bleu4: candidate and reference counts differ");
  }
  constexpr std::size_t kMaxOrder = 4;
  std::array<std::size_t, kMaxOrder> matches{};
  std::array<std::size_t, kMaxOrder> totals{};
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens& cand = candidates[i];
    const Tokens& ref = references[i];
    cand_len += cand.size();
    ref_len += ref.size();
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
      std::map<std::vector<std::string>, std::size_t> ref_counts;
      for (std::size_t s = 0; s + n <= ref.size(); ++s) {
        ++ref_counts[{ref.begin() + static_cast<std::ptrdiff_t>(s),
                      ref.begin() + static_cast<std::ptrdiff_t>(s + n)}];
      }
      std::map<std::vector<std::string>, std::size_t> cand_counts;
      for (std::size_t s = 0; s + n <= cand.size(); ++s) {
        ++cand_counts[{cand.begin() + static_cast<std::ptrdiff_t>(s),
                       cand.begin() + static_cast<std::ptrdiff_t>(s + n)}];
      }
      for (const auto& [gram, count] : cand_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
        totals[n - 1] += count;
      }
    }
  }

  double log_sum = 0.0;
  for (std::size_t n = 0; n < kMaxOrder; ++n) {
    if (matches[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
  }
  const double brevity =
      cand_len > ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return brevity * std::exp(log_sum / static_cast<double>(kMaxOrder));
}

RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) {
    throw DataError("rouge_l: candidate and reference must be non-empty");
  }
  std::vector<std::size_t> prev(reference.size() + 1, 0);
  std::vector<std::size_t> cur(reference.size() + 1, 0);
  for (std::size_t i = 1; i <= candidate.size(); ++i) {
    for (std::size_t j = 1; j <= reference.size(); ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1
                                                     : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const std::size_t lcs = prev[reference.size()];
  RougeScore score;
  score.precision = ratio(lcs, candidate.size());
  score.recall = ratio(lcs, reference.size());
  score.f1 = harmonic(score.precision, score.recall);
  return score;
}

std::vector<AuditItem> answerability_audit(const ClaimDataset& dataset, std::size_t n,
                                           std::uint64_t seed) {
  if (n < 1) throw DataError("answerability_audit: n must be >= 1");
  std::vector<AuditItem> pool;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& c : dataset.claims) {
    const auto& p = c.provenance;
    if (p.answer_origin != AnswerOrigin::kCore || p.question.empty()) continue;
    if (!seen.emplace(c.passage_id(), p.question, p.original_answer.surface).second) continue;
    pool.push_back({c.claim_id, p.question, p.original_answer.surface, c.evidence.text});
  }
  Rng rng(seed);
  return rng.sample(std::move(pool), n);
}

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_audit_sheet(std::ostream& out, const std::vector<AuditItem>& items) {
  out << "id,question,answer,evidence,answerable\n";
  for (const auto& item : items) {
    out << csv_field(item.claim_id) << ',' << csv_field(item.question) << ','
        << csv_field(item.answer) << ',' << csv_field(item.evidence) << ",\n";
  }
}

}  // namespace qacg
