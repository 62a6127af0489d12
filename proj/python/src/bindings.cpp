#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "qacg/baselines.hpp"
#include "qacg/claimgen.hpp"
#include "qacg/cli.hpp"
#include "qacg/corpus.hpp"
#include "qacg/dataset.hpp"
#include "qacg/errors.hpp"
#include "qacg/evalkit.hpp"
#include "qacg/replacement.hpp"
#include "qacg/stub_backends.hpp"

namespace py = pybind11;
using namespace qacg;

namespace {

ClaimDataset as_dataset(std::vector<GeneratedClaim> claims) { return {std::move(claims)}; }

py::dict report_dict(const EvalReport& r) {
  auto prf = [](const ClassMetrics& m) { return py::make_tuple(m.precision, m.recall, m.f1); };
  py::dict per_class;
  for (Label l : labels_of(r.space)) per_class[py::str(std::string(to_string(l)))] = prf(r.of(l));
  py::dict out;
  out["space"] = std::string(to_string(r.space));
  out["per_class"] = per_class;
  out["macro"] = prf(r.macro);
  out["confusion"] = r.confusion;
  out["n"] = r.n;
  return out;
}

std::set<Label> label_set(const std::vector<Label>& labels) {
  return {labels.begin(), labels.end()};
}

}  // namespace

PYBIND11_MODULE(_qacg, m) {
  m.doc() = "Claim generation, dataset assembly and verification metrics";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConflictError>(m, "ConflictError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<BackendError>(m, "BackendError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());

  py::enum_<Label>(m, "Label")
      .value("SUPPORTED", Label::kSupported)
      .value("REFUTED", Label::kRefuted)
      .value("NEI", Label::kNei);

  py::enum_<LabelSpace>(m, "LabelSpace")
      .value("SR", LabelSpace::kSR)
      .value("SRN", LabelSpace::kSRN);

  py::class_<GeneratedClaim>(m, "Claim")
      .def_readonly("claim_id", &GeneratedClaim::claim_id)
      .def_readonly("text", &GeneratedClaim::text)
      .def_readonly("label", &GeneratedClaim::label)
      .def_property_readonly("passage_id", &GeneratedClaim::passage_id)
      .def_property_readonly("evidence", [](const GeneratedClaim& c) { return c.evidence.text; })
      .def_property_readonly("question", [](const GeneratedClaim& c) { return c.provenance.question; })
      .def_property_readonly("answer",
                             [](const GeneratedClaim& c) { return c.provenance.original_answer.surface; })
      .def_property_readonly("replacement",
                             [](const GeneratedClaim& c) -> std::optional<std::string> {
                               if (!c.provenance.replacement_answer) return std::nullopt;
                               return c.provenance.replacement_answer->surface;
                             })
      .def("violation", [](const GeneratedClaim& c) { return find_claim_violation(c); })
      .def("__eq__", [](const GeneratedClaim& a, const GeneratedClaim& b) { return a == b; })
      .def("__repr__", [](const GeneratedClaim& c) {
        return "<Claim " + c.claim_id + " " + std::string(to_string(c.label)) + ">";
      });

  m.def(
      "generate_claims",
      [](const std::filesystem::path& articles, const std::filesystem::path& fixtures,
         std::uint64_t seed, const std::vector<Label>& labels, int window, int stride,
         int workers) {
        Corpus corpus = make_windowed_corpus(load_articles(articles), {window, stride});
        const auto backends = make_stub_generation_backends(load_stub_fixtures(fixtures));
        py::gil_scoped_release release;
        return generate_all(corpus, backends, label_set(labels), {}, seed, workers).dataset.claims;
      },
      py::arg("articles"), py::arg("fixtures"), py::arg("seed") = 0,
      py::arg("labels") = std::vector<Label>{Label::kSupported, Label::kRefuted, Label::kNei},
      py::arg("window") = 5, py::arg("stride") = 5, py::arg("workers") = 1,
      "Generate claims from an article JSONL with stub backends from a fixture file.");

  m.def("read_claims", [](const std::filesystem::path& p) { return read_claims_jsonl(p).claims; });
  m.def(
      "write_claims",
      [](const std::filesystem::path& p, std::vector<GeneratedClaim> claims, bool fever_labels) {
        write_claims_jsonl(p, as_dataset(std::move(claims)), {fever_labels});
      },
      py::arg("path"), py::arg("claims"), py::arg("fever_labels") = false);
  m.def("claims_to_jsonl", [](std::vector<GeneratedClaim> claims) {
    std::ostringstream out;
    write_claims_jsonl(out, as_dataset(std::move(claims)));
    return out.str();
  });

  m.def("dedup", [](std::vector<GeneratedClaim> c) { return dedup(as_dataset(std::move(c))).claims; });
  m.def(
      "filter_balanced",
      [](std::vector<GeneratedClaim> c, std::size_t n, std::uint64_t seed,
         std::optional<std::vector<Label>> labels) {
        std::optional<std::set<Label>> wanted;
        if (labels) wanted = label_set(*labels);
        return filter_balanced(as_dataset(std::move(c)), n, seed, wanted).claims;
      },
      py::arg("claims"), py::arg("n_per_class"), py::arg("seed") = 0,
      py::arg("labels") = py::none());

  m.def("overlaps", &overlaps, py::arg("original"), py::arg("candidate"));

  m.def(
      "macro_prf",
      [](const std::vector<Label>& gold, const std::vector<Label>& pred,
         std::optional<LabelSpace> space) { return report_dict(macro_prf(gold, pred, space)); },
      py::arg("gold"), py::arg("pred"), py::arg("space") = py::none());
  m.def("bleu4", [](const std::vector<Tokens>& c, const std::vector<Tokens>& r) { return bleu4(c, r); },
        py::arg("candidates"), py::arg("references"));
  m.def(
      "rouge_l",
      [](const Tokens& c, const Tokens& r) {
        const auto s = rouge_l(c, r);
        return py::make_tuple(s.precision, s.recall, s.f1);
      },
      py::arg("candidate"), py::arg("reference"));

  m.def("random_guess", &random_guess, py::arg("n"), py::arg("space"), py::arg("seed") = 0);
  m.def(
      "perplexity_bands",
      [](const std::vector<double>& scores, LabelSpace space) { return perplexity_bands(scores, space); },
      py::arg("scores"), py::arg("space") = LabelSpace::kSRN);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_command(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a qacg subcommand; returns (exit_code, stdout, stderr).");
}
