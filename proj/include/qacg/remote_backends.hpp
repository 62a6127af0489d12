#pragma once

// HTTP/JSON clients for backends served out of process. Every operation is
// a POST of a JSON object to <base_url><path>; any non-200 status, transport
// failure, or malformed body raises BackendError.
//
//   POST /ner         {"text"}                       -> {"entities": [{"surface", "etype", "start", "end"}]}
//   POST /question    {"evidence", "answer"}         -> {"question"}
//   POST /qa2claim    {"question", "answer"}         -> {"claim"}
//   POST /similar     {"query", "etype", "k"}        -> {"phrases": [{"surface", "etype", "score"}]}
//   POST /nli         {"premise", "hypothesis"}      -> {"label", "scores": {"entailment", "contradiction", "neutral"}}
//   POST /perplexity  {"text"}                       -> {"perplexity"}
//   POST /fill        {"context", "masked", "n"}     -> {"fills": [...]}
//
// Entity types on the wire use the tag names of labels.hpp.

#include <string>

#include "qacg/backends.hpp"

namespace qacg {

/// Environment variable consulted for the endpoint when none is configured.
inline constexpr const char* kBackendUrlEnv = "QACG_BACKEND_URL";

struct RemoteEndpoint {
  // scheme://host[:port][/prefix], e.g. "http://127.0.0.1:8080/v1".
  std::string base_url;
  int timeout_seconds = 60;
};

/// Configured endpoint, or the environment variable when `configured` is
/// empty. Throws UsageError when neither is set.
RemoteEndpoint resolve_endpoint(const std::string& configured);

GenerationBackends make_remote_generation_backends(const RemoteEndpoint& endpoint);
BaselineBackends make_remote_baseline_backends(const RemoteEndpoint& endpoint);

}  // namespace qacg
