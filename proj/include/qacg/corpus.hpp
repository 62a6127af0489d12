#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qacg/types.hpp"

namespace qacg {

/// Immutable keyed article collection; safe for concurrent readers.
class ArticleStore {
 public:
  ArticleStore() = default;
  /// Validates every article. Throws ConflictError on a duplicate id and
  /// DataError on an invalid article.
  explicit ArticleStore(std::vector<Article> articles);

  const Article* find(const std::string& article_id) const;
  const Article& at(const std::string& article_id) const;
  const std::vector<Article>& articles() const { return articles_; }
  std::size_t size() const { return articles_.size(); }
  bool empty() const { return articles_.empty(); }

 private:
  std::vector<Article> articles_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Throws DataError if sids are not 0..n-1 or a text is blank.
void validate_article(const Article& article);

/// One JSON object per line:
///   {"article_id": ..., "title": ..., "sentences": [{"sid": 0, "text": ...}, ...]}
/// Blank lines are skipped.
ArticleStore read_articles(std::istream& in);
ArticleStore load_articles(const std::filesystem::path& path);
void write_articles(std::ostream& out, const ArticleStore& store);

/// Builds a passage from `sent_ids` (ascending, all present in `article`).
EvidencePassage make_passage(const Article& article, std::vector<int> sent_ids,
                             std::string passage_id);

/// Id used for window passages: "<article_id>:<first_sid>-<last_sid>".
std::string window_passage_id(const std::string& article_id, int first, int last);

struct WindowConfig {
  int window = 5;
  int stride = 5;
};

/// Sliding windows of `window` consecutive sentences every `stride`
/// sentences. The last window may be shorter; windows never start past the
/// final sentence.
std::vector<EvidencePassage> window_passages(const Article& article,
                                             const WindowConfig& config = {});

/// Evidence passages keyed back to their articles.
struct Corpus {
  ArticleStore store;
  std::vector<EvidencePassage> passages;

  const Article& article_of(const EvidencePassage& passage) const {
    return store.at(passage.article_id);
  }
};

Corpus make_windowed_corpus(ArticleStore store, const WindowConfig& config = {});

/// Passage interchange: {"passage_id", "article_id", "sent_ids", "text"}.
/// On read, "text" is optional; when present it must equal the join of the
/// referenced sentences. Passage ids must be unique.
std::vector<EvidencePassage> read_passages(std::istream& in, const ArticleStore& store);
std::vector<EvidencePassage> load_passages(const std::filesystem::path& path,
                                           const ArticleStore& store);
void write_passages(std::ostream& out, const std::vector<EvidencePassage>& passages);

struct ExtensionContext {
  std::string passage_id;
  std::vector<Sentence> sentences;
  int k_requested = 0;

  std::vector<int> sent_ids() const;
  /// Sentence texts joined by a single space.
  std::string text() const;
};

inline constexpr int kDefaultExtensionSize = 5;

/// Samples min(k, |candidates|) sentences of `article` that are not in the
/// passage, uniformly without replacement (see rng.hpp for the procedure;
/// candidates are taken in ascending sid order and Rng is seeded with `seed`
/// directly). The result is sorted by sid.
ExtensionContext get_extension_context(const Article& article,
                                       const EvidencePassage& passage, int k,
                                       std::uint64_t seed);

struct ClaimWriteOptions {
  // Write FEVER's label strings (SUPPORTS/REFUTES/NOT ENOUGH INFO).
  bool fever_labels = false;
};

/// Claim interchange, one claim per line:
///   {"id", "claim", "label",
///    "evidence": {"passage_id", "article_id", "sent_ids", "text"},
///    "provenance": {"question", "original_answer": {...}, "answer_origin",
///                   ["answer_sent_id"], ["replacement_answer": {...}],
///                   ["extension_sent_ids"]}}
void write_claims_jsonl(std::ostream& out, const ClaimDataset& dataset,
                        const ClaimWriteOptions& options = {});
void write_claims_jsonl(const std::filesystem::path& path, const ClaimDataset& dataset,
                        const ClaimWriteOptions& options = {});
/// Throws ParseError naming the 1-based record line on malformed input or
/// an unknown label, ConflictError on a repeated id.
ClaimDataset read_claims_jsonl(std::istream& in);
ClaimDataset read_claims_jsonl(const std::filesystem::path& path);

}  // namespace qacg
