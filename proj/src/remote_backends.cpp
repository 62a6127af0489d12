#include "qacg/remote_backends.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "qacg/errors.hpp"

namespace qacg {

using json = nlohmann::json;

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw UsageError("backend URL lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

class RemoteClient {
 public:
  explicit RemoteClient(RemoteEndpoint endpoint)
      : endpoint_(std::move(endpoint)), url_(split_url(endpoint_.base_url)) {}

  // A fresh client per call keeps this safe for concurrent use.
  json post(const std::string& path, const json& body) const {
    httplib::Client client(url_.origin);
    client.set_connection_timeout(endpoint_.timeout_seconds, 0);
    client.set_read_timeout(endpoint_.timeout_seconds, 0);
    client.set_write_timeout(endpoint_.timeout_seconds, 0);
    const std::string target = url_.prefix + path;
    auto res = client.Post(target, body.dump(), "application/json");
    if (!res) {
      throw BackendError("POST " + endpoint_.base_url + path + " failed: " +
                         httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw BackendError("POST " + endpoint_.base_url + path + " returned HTTP " +
                         std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw BackendError("POST " + endpoint_.base_url + path + ": malformed response: " +
                         e.what());
    }
  }

  const std::string& url() const { return endpoint_.base_url; }

 private:
  RemoteEndpoint endpoint_;
  SplitUrl url_;
};

template <typename Fn>
auto decode(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw BackendError(what + ": unexpected response shape: " + e.what());
  }
}

EntityType wire_etype(const json& j) {
  const auto text = j.get<std::string>();
  auto etype = parse_entity_type(text);
  if (!etype) throw BackendError("unknown entity type on the wire: '" + text + "'");
  return *etype;
}

class RemoteRecognizer final : public EntityRecognizer {
 public:
  explicit RemoteRecognizer(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string name() const override { return "remote-ner@" + client_->url(); }

 protected:
  std::vector<EntityMention> do_recognize(std::string_view text) const override {
    const json res = client_->post("/ner", {{"text", text}});
    return decode("ner", [&] {
      std::vector<EntityMention> out;
      for (const auto& e : res.at("entities")) {
        out.push_back({e.at("surface").get<std::string>(), wire_etype(e.at("etype")),
                       e.at("start").get<std::size_t>(), e.at("end").get<std::size_t>()});
      }
      return out;
    });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemoteQuestionGenerator final : public QuestionGenerator {
 public:
  explicit RemoteQuestionGenerator(std::shared_ptr<const RemoteClient> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "remote-question@" + client_->url(); }

 protected:
  std::string do_generate_question(std::string_view evidence,
                                   std::string_view answer) const override {
    const json res = client_->post("/question", {{"evidence", evidence}, {"answer", answer}});
    return decode("question", [&] { return res.at("question").get<std::string>(); });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemoteClaimConverter final : public ClaimConverter {
 public:
  explicit RemoteClaimConverter(std::shared_ptr<const RemoteClient> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "remote-qa2claim@" + client_->url(); }

 protected:
  std::string do_qa_to_claim(std::string_view question, std::string_view answer) const override {
    const json res = client_->post("/qa2claim", {{"question", question}, {"answer", answer}});
    return decode("qa2claim", [&] { return res.at("claim").get<std::string>(); });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemotePhraseIndex final : public PhraseIndex {
 public:
  explicit RemotePhraseIndex(std::shared_ptr<const RemoteClient> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "remote-similar@" + client_->url(); }

 protected:
  std::vector<SimilarPhrase> do_similar_phrases(std::string_view query, EntityType etype,
                                                int k) const override {
    const json res =
        client_->post("/similar", {{"query", query}, {"etype", to_string(etype)}, {"k", k}});
    return decode("similar", [&] {
      std::vector<SimilarPhrase> out;
      for (const auto& p : res.at("phrases")) {
        out.push_back({p.at("surface").get<std::string>(), wire_etype(p.at("etype")),
                       p.at("score").get<double>()});
      }
      return out;
    });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemoteNliClassifier final : public NliClassifier {
 public:
  explicit RemoteNliClassifier(std::shared_ptr<const RemoteClient> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "remote-nli@" + client_->url(); }

 protected:
  NliResult do_classify(std::string_view premise, std::string_view hypothesis) const override {
    const json res = client_->post("/nli", {{"premise", premise}, {"hypothesis", hypothesis}});
    return decode("nli", [&] {
      const auto label_text = res.at("label").get<std::string>();
      auto label = parse_nli_label(label_text);
      if (!label) throw BackendError("nli: unknown label '" + label_text + "'");
      NliResult result{*label, {}};
      const auto& scores = res.at("scores");
      for (NliLabel l : {NliLabel::kEntailment, NliLabel::kContradiction, NliLabel::kNeutral}) {
        result.scores[static_cast<std::size_t>(l)] =
            scores.at(std::string(to_string(l))).get<double>();
      }
      return result;
    });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemotePerplexityScorer final : public PerplexityScorer {
 public:
  explicit RemotePerplexityScorer(std::shared_ptr<const RemoteClient> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "remote-perplexity@" + client_->url(); }

 protected:
  double do_perplexity(std::string_view text) const override {
    const json res = client_->post("/perplexity", {{"text", text}});
    return decode("perplexity", [&] { return res.at("perplexity").get<double>(); });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemoteMaskedFiller final : public MaskedLmFiller {
 public:
  explicit RemoteMaskedFiller(std::shared_ptr<const RemoteClient> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "remote-fill@" + client_->url(); }

 protected:
  std::vector<std::string> do_fill(std::string_view context, std::string_view masked_text,
                                   int n) const override {
    const json res =
        client_->post("/fill", {{"context", context}, {"masked", masked_text}, {"n", n}});
    return decode("fill", [&] { return res.at("fills").get<std::vector<std::string>>(); });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

}  // namespace

RemoteEndpoint resolve_endpoint(const std::string& configured) {
  if (!configured.empty()) return {configured};
  if (const char* env = std::getenv(kBackendUrlEnv); env != nullptr && *env != '\0') {
    return {env};
  }
  throw UsageError(std::string("remote backend selected but no endpoint configured (set ") +
                   kBackendUrlEnv + ")");
}

GenerationBackends make_remote_generation_backends(const RemoteEndpoint& endpoint) {
  auto client = std::make_shared<const RemoteClient>(endpoint);
  return {std::make_shared<RemoteRecognizer>(client),
          std::make_shared<RemoteQuestionGenerator>(client),
          std::make_shared<RemoteClaimConverter>(client),
          std::make_shared<RemotePhraseIndex>(client)};
}

BaselineBackends make_remote_baseline_backends(const RemoteEndpoint& endpoint) {
  auto client = std::make_shared<const RemoteClient>(endpoint);
  return {std::make_shared<RemoteRecognizer>(client), std::make_shared<RemoteNliClassifier>(client),
          std::make_shared<RemotePerplexityScorer>(client),
          std::make_shared<RemoteMaskedFiller>(client)};
}

}  // namespace qacg
