#include "qacg/cli.hpp"

#include <algorithm>
#include <numeric>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qacg/baselines.hpp"
#include "qacg/claimgen.hpp"
#include "qacg/config.hpp"
#include "qacg/corpus.hpp"
#include "qacg/dataset.hpp"
#include "qacg/errors.hpp"
#include "qacg/evalkit.hpp"
#include "qacg/remote_backends.hpp"
#include "qacg/stub_backends.hpp"
#include "qacg/text.hpp"
#include "qacg/verifier.hpp"

namespace qacg {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::set<Label> parse_label_list(const std::string& text) {
  std::set<Label> labels;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const std::string folded = casefold(trim(item));
    if (folded == "supported" || folded == "s") {
      labels.insert(Label::kSupported);
    } else if (folded == "refuted" || folded == "r") {
      labels.insert(Label::kRefuted);
    } else if (folded == "nei" || folded == "n") {
      labels.insert(Label::kNei);
    } else {
      throw UsageError("unknown label '" + item + "' (expected supported, refuted, nei)");
    }
  }
  if (labels.empty()) throw UsageError("no labels given");
  return labels;
}

template <typename T>
std::vector<T> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<T> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(std::string(trim(item)), &used);
      if (used != trim(item).size()) throw std::invalid_argument(item);
      values.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw UsageError("invalid " + what + " '" + item + "'");
    }
  }
  return values;
}

LabelSpace parse_space(const std::string& text) {
  auto space = parse_label_space(text);
  if (!space) throw UsageError("unknown label space '" + text + "' (expected SR or SRN)");
  return *space;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

GenerationBackends generation_backends(const BackendConfig& config) {
  if (config.kind == "stub") {
    if (config.fixtures.empty()) throw UsageError("stub backend needs a fixtures file (--fixtures)");
    return make_stub_generation_backends(load_stub_fixtures(config.fixtures));
  }
  if (config.kind == "remote") return make_remote_generation_backends(resolve_endpoint(config.endpoint));
  throw UsageError("generation backend kind '" + config.kind +
                   "' is not available (expected stub or remote)");
}

BaselineBackends baseline_backends(const BackendConfig& config) {
  if (config.kind == "stub") {
    if (config.fixtures.empty()) throw UsageError("stub backend needs a fixtures file (--fixtures)");
    return make_stub_baseline_backends(load_stub_fixtures(config.fixtures));
  }
  if (config.kind == "remote") return make_remote_baseline_backends(resolve_endpoint(config.endpoint));
  throw UsageError("baseline backend kind '" + config.kind +
                   "' is not available (expected stub or remote)");
}

ordered_json counts_json(const LabelCounts& counts) {
  ordered_json j;
  for (Label l : kAllLabels) j[std::string(to_string(l))] = count_of(counts, l);
  return j;
}

/// Per-command options shared by every subcommand.
struct Common {
  std::string config_path;
  std::string manifest_path;
  std::optional<std::uint64_t> seed;
  std::string backend_kind;
  std::string fixtures;
  std::string endpoint;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void add_common(CLI::App* cmd, bool with_backend);
  RunConfig resolve_config() const;
  void write_manifest(const std::string& command, const std::filesystem::path& primary,
                      const RunConfig& config, ordered_json details) const;

  void cmd_ingest();
  void cmd_generate();
  void cmd_filter();
  void cmd_export();
  void cmd_train();
  void cmd_eval();
  void cmd_baseline();
  void cmd_fewshot();
  void cmd_qg_eval();
  void cmd_audit();

  std::ostream& out_;
  std::ostream& err_;
  Clock::time_point start_ = Clock::now();

  Common common_;
  // Options; which ones are meaningful depends on the subcommand.
  std::string articles_, passages_, train_, in_, out_path_, model_dir_, init_model_, gold_, predictions_,
      report_, name_, test_, pretrain_, pool_, candidates_, references_, format_ = "triples",
      labels_ = "supported,refuted,nei", label_space_, classifier_, sizes_ = "10,50,100",
      seeds_ = "1,2,3";
  std::optional<int> window_, stride_, k_replace_, k_ext_, workers_, epochs_;
  std::optional<std::size_t> batch_size_;
  std::optional<double> lr_;
  std::size_t per_class_ = 0;
  std::size_t audit_n_ = kDefaultAuditSize;
  bool fever_labels_ = false;
  bool dedup_ = false;
};

void Runner::add_common(CLI::App* cmd, bool with_backend) {
  cmd->add_option("--config", common_.config_path, "Config file (JSON)");
  cmd->add_option("--manifest", common_.manifest_path,
                  "Manifest path (default: <output>.manifest.json)");
  cmd->add_option("--seed", common_.seed, "Random seed (overrides config)");
  if (with_backend) {
    cmd->add_option("--backend", common_.backend_kind, "Backend kind: stub | remote")
        ->check(CLI::IsMember({"stub", "remote", "local-model"}));
    cmd->add_option("--fixtures", common_.fixtures, "Stub fixture file");
    cmd->add_option("--endpoint", common_.endpoint,
                    std::string("Remote backend base URL (default: $") + kBackendUrlEnv + ")");
  }
}

RunConfig Runner::resolve_config() const {
  RunConfig config = common_.config_path.empty() ? RunConfig{} : load_config(common_.config_path);
  if (common_.seed) config.seed = *common_.seed;
  if (!common_.backend_kind.empty()) config.backend.kind = common_.backend_kind;
  if (!common_.fixtures.empty()) config.backend.fixtures = common_.fixtures;
  if (!common_.endpoint.empty()) config.backend.endpoint = common_.endpoint;
  if (window_) config.passages.window = *window_;
  if (stride_) config.passages.stride = *stride_;
  if (k_replace_) config.claimgen.k_replace = *k_replace_;
  if (k_ext_) config.claimgen.k_ext = *k_ext_;
  if (workers_) config.workers = *workers_;
  if (epochs_) config.train.epochs = *epochs_;
  if (batch_size_) config.train.batch_size = *batch_size_;
  if (lr_) config.train.learning_rate = *lr_;
  if (!label_space_.empty()) config.train.label_space = parse_space(label_space_);
  if (!classifier_.empty()) config.classifier = classifier_;
  config.train.seed = config.seed;
  return config;
}

void Runner::write_manifest(const std::string& command, const std::filesystem::path& primary,
                            const RunConfig& config, ordered_json details) const {
  const std::filesystem::path path = common_.manifest_path.empty()
                                         ? std::filesystem::path(primary.string() + ".manifest.json")
                                         : std::filesystem::path(common_.manifest_path);
  ordered_json m;
  m["command"] = command;
  m["config_hash"] = config_hash(config);
  m["seed"] = config.seed;
  for (auto& [key, value] : details.items()) m[key] = value;
  m["wall_time_s"] =
      std::chrono::duration<double>(Clock::now() - start_).count();
  auto out = open_output(path);
  out << m.dump(2) << '\n';
}

void Runner::cmd_ingest() {
  const RunConfig config = resolve_config();
  Corpus corpus{load_articles(articles_), {}};
  if (passages_.empty()) {
    corpus = make_windowed_corpus(std::move(corpus.store), config.passages);
  } else {
    corpus.passages = load_passages(passages_, corpus.store);
  }
  auto out = open_output(out_path_);
  write_passages(out, corpus.passages);
  out_ << "ingested " << corpus.store.size() << " articles into " << corpus.passages.size()
       << " passages\n";
  write_manifest("ingest", out_path_, config,
                 {{"articles", corpus.store.size()}, {"passages", corpus.passages.size()}});
}

void Runner::cmd_generate() {
  const RunConfig config = resolve_config();
  const auto labels = parse_label_list(labels_);
  Corpus corpus{load_articles(articles_), {}};
  if (passages_.empty()) {
    corpus = make_windowed_corpus(std::move(corpus.store), config.passages);
  } else {
    corpus.passages = load_passages(passages_, corpus.store);
  }
  const auto backends = generation_backends(config.backend);
  const auto result =
      generate_all(corpus, backends, labels, config.claimgen, config.seed, config.workers);
  const auto& m = result.manifest;
  // Every passage failed: the backend is unusable, not the data.
  if (!m.backend_failures.empty() && m.backend_failures.size() == corpus.passages.size()) {
    throw BackendError("all " + std::to_string(corpus.passages.size()) +
                       " passages failed; first: " + m.backend_failures.front().message);
  }
  write_claims_jsonl(std::filesystem::path(out_path_), result.dataset);

  for (const auto& w : m.warnings) err_ << "warning: " << w << '\n';
  for (const auto& f : m.backend_failures) {
    err_ << "backend failure in passage " << f.passage_id << ": " << f.message << '\n';
  }
  ordered_json labels_json = ordered_json::array();
  for (Label l : labels) labels_json.push_back(to_string(l));
  ordered_json failures = ordered_json::array();
  for (const auto& f : m.backend_failures) {
    failures.push_back({{"passage_id", f.passage_id}, {"message", f.message}});
  }
  write_manifest("generate", out_path_, config,
                 {{"labels", labels_json},
                  {"passages", m.stats.passages},
                  {"counts", counts_json(m.counts)},
                  {"skips",
                   {{"passages_without_entities", m.stats.passages_without_entities},
                    {"no_replacement", m.stats.no_replacement},
                    {"empty_extension", m.stats.empty_extension},
                    {"nei_answer_in_passage", m.stats.nei_answer_in_passage}}},
                  {"backend_failures", failures},
                  {"warnings", m.warnings}});
  out_ << "generated " << result.dataset.size() << " claims (S/R/N " << count_of(m.counts, Label::kSupported)
       << "/" << count_of(m.counts, Label::kRefuted) << "/" << count_of(m.counts, Label::kNei)
       << ") from " << m.stats.passages << " passages\n";
}

void Runner::cmd_filter() {
  const RunConfig config = resolve_config();
  ClaimDataset dataset = read_claims_jsonl(std::filesystem::path(in_));
  const LabelCounts before = dataset.counts();
  if (dedup_) dataset = dedup(dataset);
  std::optional<std::set<Label>> labels;
  if (!labels_.empty()) labels = parse_label_list(labels_);
  if (labels) dataset = filter_labels(dataset, *labels);
  const ClaimDataset balanced = filter_balanced(dataset, per_class_, config.seed, labels);
  write_claims_jsonl(std::filesystem::path(out_path_), balanced);
  write_manifest("filter", out_path_, config,
                 {{"per_class", per_class_},
                  {"dedup", dedup_},
                  {"input_counts", counts_json(before)},
                  {"counts", counts_json(balanced.counts())}});
  out_ << "kept " << balanced.size() << " of " << std::accumulate(before.begin(), before.end(), std::size_t{0})
       << " claims\n";
}

void Runner::cmd_export() {
  const RunConfig config = resolve_config();
  const ClaimDataset dataset = read_claims_jsonl(std::filesystem::path(in_));
  auto out = open_output(out_path_);
  if (format_ == "claims") {
    write_claims_jsonl(out, dataset, {fever_labels_});
  } else {
    write_examples_jsonl(out, to_examples(dataset), fever_labels_);
  }
  write_manifest("export", out_path_, config,
                 {{"format", format_}, {"fever_labels", fever_labels_},
                  {"counts", counts_json(dataset.counts())}});
}

void Runner::cmd_train() {
  const RunConfig config = resolve_config();
  const auto examples = load_examples(train_);
  auto backend = make_classifier(config.classifier);
  std::optional<ModelHandle> init;
  if (!init_model_.empty()) init = load_model(init_model_);
  const ModelHandle model = train(examples, *backend, config.train, init ? &*init : nullptr);
  save_model(model, model_dir_);
  ordered_json history = ordered_json::array();
  for (const auto& h : model.history) {
    history.push_back({{"epoch", h.epoch}, {"selection_macro_f1", h.selection_macro_f1}});
  }
  write_manifest("train", std::filesystem::path(model_dir_) / "train", config,
                 {{"classifier", model.backend},
                  {"n_train", model.n_train},
                  {"n_selection", model.n_selection},
                  {"best_epoch", model.best_epoch},
                  {"history", history}});
  out_ << "trained " << model.backend << " on " << model.n_train << " examples; best epoch "
       << model.best_epoch << "\n";
}


std::vector<Label> gold_of(const std::vector<VerificationExample>& examples) {
  std::vector<Label> gold;
  gold.reserve(examples.size());
  for (const auto& e : examples) gold.push_back(e.label);
  return gold;
}

void write_predictions(const std::filesystem::path& path,
                       const std::vector<VerificationExample>& examples,
                       const std::vector<Label>& labels) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    ordered_json j;
    j["claim_id"] = examples[i].id;
    j["label"] = to_string(labels[i]);
    out << j.dump() << '\n';
  }
}

std::vector<Label> read_predictions(const std::filesystem::path& path,
                                    const std::vector<VerificationExample>& gold) {
  std::map<std::string, Label> by_id;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const auto text = j.at("label").get<std::string>();
      auto label = parse_label(text);
      if (!label) throw ParseError("unknown label '" + text + "'", line_no);
      by_id[j.at("claim_id").get<std::string>()] = *label;
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed prediction: ") + e.what(), line_no);
    }
  }
  std::vector<Label> preds;
  preds.reserve(gold.size());
  for (const auto& e : gold) {
    auto it = by_id.find(e.id);
    if (it == by_id.end()) throw DataError("no prediction for claim '" + e.id + "'");
    preds.push_back(it->second);
  }
  return preds;
}

}  // namespace

void Runner::cmd_eval() {
  const RunConfig config = resolve_config();
  const auto gold = load_examples(gold_);
  std::vector<Label> preds;
  std::optional<LabelSpace> space;
  if (!label_space_.empty()) space = parse_space(label_space_);
  if (!model_dir_.empty()) {
    const ModelHandle model = load_model(model_dir_);
    auto backend = make_classifier(model.backend);
    for (const auto& p : predict(model, *backend, gold)) preds.push_back(p.label);
    if (!space) space = model.config.label_space;
  } else if (!predictions_.empty()) {
    preds = read_predictions(predictions_, gold);
  } else {
    throw UsageError("eval needs --model-dir or --predictions");
  }
  const EvalReport report = macro_prf(gold_of(gold), preds, space);
  {
    auto out = open_output(report_);
    out << report_to_json(report) << '\n';
  }
  out_ << format_report_table(report);
  write_manifest("eval", report_, config,
                 {{"n", report.n}, {"macro_f1", report.macro.f1},
                  {"label_space", to_string(report.space)}});
}

void Runner::cmd_baseline() {
  const RunConfig config = resolve_config();
  const auto examples = load_examples(test_);
  const LabelSpace space = label_space_.empty() ? LabelSpace::kSRN : parse_space(label_space_);
  std::vector<Label> preds;
  std::string row_name;
  if (name_ == "random") {
    preds = random_guess(examples.size(), space, config.seed);
    row_name = "Random guess";
  } else {
    const auto backends = baseline_backends(config.backend);
    if (name_ == "perplexity") {
      preds = perplexity_tercile(examples, *backends.perplexity, space);
      row_name = "Perplexity bands";
    } else if (name_ == "nli") {
      preds = nli_transfer(examples, *backends.nli, space);
      row_name = "NLI transfer";
    } else {
      preds = lm_fact_checker_all(examples, {*backends.ner, *backends.filler, *backends.nli}, space);
      row_name = "Masked-LM fact checker";
    }
  }
  write_predictions(out_path_, examples, preds);
  const EvalReport report = macro_prf(gold_of(examples), preds, space);
  out_ << format_report_row(row_name, report) << '\n';
  LabelCounts predicted{};
  for (Label l : preds) ++count_of(predicted, l);
  write_manifest("baseline", out_path_, config,
                 {{"name", name_}, {"label_space", to_string(space)}, {"n", examples.size()},
                  {"counts", counts_json(predicted)},
                  {"macro", {{"precision", report.macro.precision},
                             {"recall", report.macro.recall},
                             {"f1", report.macro.f1}}}});
}

void Runner::cmd_fewshot() {
  const RunConfig config = resolve_config();
  const auto pretrain = load_examples(pretrain_);
  const auto pool = load_examples(pool_);
  const auto test = load_examples(test_);
  FewshotConfig fc;
  fc.sizes = parse_number_list<std::size_t>(sizes_, "size");
  fc.seeds = parse_number_list<std::uint64_t>(seeds_, "seed");
  fc.train = config.train;
  const std::string classifier = config.classifier;
  make_classifier(classifier);  // validates the name before any training
  const Curve curve =
      fewshot_curve(pretrain, pool, test, [&](Arm) { return make_classifier(classifier); }, fc);
  {
    auto out = open_output(out_path_);
    write_curve_csv(out, curve);
  }
  ordered_json means = ordered_json::array();
  for (std::size_t k : fc.sizes) {
    const double a = curve.mean(k, Arm::kPretrained);
    const double b = curve.mean(k, Arm::kScratch);
    out_ << "k=" << k << "  pretrained " << 100.0 * a << "  scratch " << 100.0 * b << '\n';
    means.push_back({{"size", k}, {"pretrained", a}, {"scratch", b}});
  }
  write_manifest("fewshot", out_path_, config,
                 {{"classifier", classifier}, {"points", curve.points.size()}, {"means", means}});
}

void Runner::cmd_qg_eval() {
  const RunConfig config = resolve_config();
  const auto cand_lines = read_lines(candidates_);
  const auto ref_lines = read_lines(references_);
  if (cand_lines.size() != ref_lines.size()) {
    throw DataError("candidates and references have different line counts");
  }
  std::vector<Tokens> cands;
  std::vector<Tokens> refs;
  for (std::size_t i = 0; i < cand_lines.size(); ++i) {
    cands.push_back(split_whitespace(cand_lines[i]));
    refs.push_back(split_whitespace(ref_lines[i]));
  }
  const double bleu = bleu4(cands, refs);
  RougeScore mean;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].empty() || refs[i].empty()) {
      throw DataError("empty line " + std::to_string(i + 1) + " in candidates or references");
    }
    const RougeScore r = rouge_l(cands[i], refs[i]);
    mean.precision += r.precision / static_cast<double>(cands.size());
    mean.recall += r.recall / static_cast<double>(cands.size());
    mean.f1 += r.f1 / static_cast<double>(cands.size());
  }
  ordered_json result{{"pairs", cands.size()},
                      {"bleu4", bleu},
                      {"rouge_l", {{"precision", mean.precision},
                                   {"recall", mean.recall},
                                   {"f1", mean.f1}}}};
  if (!out_path_.empty()) {
    auto out = open_output(out_path_);
    out << result.dump(2) << '\n';
    write_manifest("qg-eval", out_path_, config, {{"pairs", cands.size()}});
  }
  out_ << "BLEU-4 " << 100.0 * bleu << "  ROUGE-L " << 100.0 * mean.f1 << '\n';
}

void Runner::cmd_audit() {
  const RunConfig config = resolve_config();
  const ClaimDataset dataset = read_claims_jsonl(std::filesystem::path(in_));
  const auto items = answerability_audit(dataset, audit_n_, config.seed);
  {
    auto out = open_output(out_path_);
    write_audit_sheet(out, items);
  }
  write_manifest("audit", out_path_, config, {{"requested", audit_n_}, {"sampled", items.size()}});
  out_ << "wrote " << items.size() << " items to " << out_path_ << '\n';
}

int Runner::run(const std::vector<std::string>& args) {
  CLI::App app{"qacg: claim generation, dataset assembly and fact-verification evaluation"};
  app.name("qacg");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto* ingest = app.add_subcommand("ingest", "Validate articles and write evidence passages");
  add_common(ingest, false);
  ingest->add_option("--articles", articles_, "Article JSONL")->required();
  ingest->add_option("--passages", passages_, "Gold passage JSONL (default: windowed)");
  ingest->add_option("--window", window_, "Sentences per window passage");
  ingest->add_option("--stride", stride_, "Window stride");
  ingest->add_option("--out", out_path_, "Passage JSONL output")->required();

  auto* generate = app.add_subcommand("generate", "Generate claims from a corpus");
  add_common(generate, true);
  generate->add_option("--articles", articles_, "Article JSONL")->required();
  generate->add_option("--passages", passages_, "Gold passage JSONL (default: windowed)");
  generate->add_option("--window", window_, "Sentences per window passage");
  generate->add_option("--stride", stride_, "Window stride");
  generate->add_option("--labels", labels_, "Comma-separated: supported,refuted,nei");
  generate->add_option("--k-replace", k_replace_, "Similar phrases considered per replacement");
  generate->add_option("--k-ext", k_ext_, "Extension sentences for NEI claims");
  generate->add_option("--workers", workers_, "Passage-level worker threads");
  generate->add_option("--out", out_path_, "Claim JSONL output")->required();

  auto* filter = app.add_subcommand("filter", "Deduplicate and balance a claim dataset");
  add_common(filter, false);
  filter->add_option("--in", in_, "Claim JSONL input")->required();
  filter->add_option("--out", out_path_, "Claim JSONL output")->required();
  filter->add_option("--per-class", per_class_, "Claims sampled per class")->required();
  filter->add_option("--labels", labels_, "Classes to keep (default: all present)");
  filter->add_flag("--dedup", dedup_, "Drop exact duplicates first");

  auto* exporter = app.add_subcommand("export", "Export claims for external tools");
  add_common(exporter, false);
  exporter->add_option("--in", in_, "Claim JSONL input")->required();
  exporter->add_option("--out", out_path_, "Output JSONL")->required();
  exporter->add_option("--format", format_, "triples | claims")
      ->check(CLI::IsMember({"triples", "claims"}));
  exporter->add_flag("--fever-labels", fever_labels_, "Use SUPPORTS/REFUTES/NOT ENOUGH INFO");

  auto* trainer = app.add_subcommand("train", "Train a verifier");
  add_common(trainer, false);
  trainer->add_option("--train", train_, "Claim or triple JSONL")->required();
  trainer->add_option("--model-dir", model_dir_, "Output model directory")->required();
  trainer->add_option("--init-model", init_model_, "Model directory to fine-tune from");
  trainer->add_option("--classifier", classifier_, "majority | lexical");
  trainer->add_option("--label-space", label_space_, "SR | SRN");
  trainer->add_option("--batch-size", batch_size_, "Mini-batch size");
  trainer->add_option("--lr", lr_, "Learning rate");
  trainer->add_option("--epochs", epochs_, "Training epochs");

  auto* evaluator = app.add_subcommand("eval", "Evaluate a model or a prediction file");
  add_common(evaluator, false);
  evaluator->add_option("--gold", gold_, "Claim or triple JSONL with gold labels")->required();
  evaluator->add_option("--model-dir", model_dir_, "Trained model directory");
  evaluator->add_option("--predictions", predictions_, "Prediction JSONL {claim_id, label}");
  evaluator->add_option("--label-space", label_space_, "SR | SRN");
  evaluator->add_option("--report", report_, "Report JSON output")->required();

  auto* baseline = app.add_subcommand("baseline", "Run a zero-shot baseline");
  add_common(baseline, true);
  baseline->add_option("--name", name_, "random | perplexity | nli | lmfc")
      ->required()
      ->check(CLI::IsMember({"random", "perplexity", "nli", "lmfc"}));
  baseline->add_option("--test", test_, "Claim or triple JSONL")->required();
  baseline->add_option("--label-space", label_space_, "SR | SRN (default SRN)");
  baseline->add_option("--out", out_path_, "Prediction JSONL output")->required();

  auto* fewshot = app.add_subcommand("fewshot", "Few-shot learning curve");
  add_common(fewshot, false);
  fewshot->add_option("--pretrain", pretrain_, "Generated training data")->required();
  fewshot->add_option("--pool", pool_, "Labeled pool to sample from")->required();
  fewshot->add_option("--test", test_, "Test set")->required();
  fewshot->add_option("--sizes", sizes_, "Comma-separated examples per class");
  fewshot->add_option("--seeds", seeds_, "Comma-separated sampling seeds");
  fewshot->add_option("--classifier", classifier_, "majority | lexical");
  fewshot->add_option("--label-space", label_space_, "SR | SRN");
  fewshot->add_option("--batch-size", batch_size_, "Mini-batch size");
  fewshot->add_option("--lr", lr_, "Learning rate");
  fewshot->add_option("--epochs", epochs_, "Training epochs");
  fewshot->add_option("--out", out_path_, "Curve CSV output")->required();

  auto* qg = app.add_subcommand("qg-eval", "BLEU-4 and ROUGE-L of generated questions");
  add_common(qg, false);
  qg->add_option("--candidates", candidates_, "One whitespace-tokenized question per line")
      ->required();
  qg->add_option("--references", references_, "Reference questions, line-aligned")->required();
  qg->add_option("--out", out_path_, "Result JSON output");

  auto* audit = app.add_subcommand("audit", "Sample QA pairs for answerability rating");
  add_common(audit, false);
  audit->add_option("--in", in_, "Claim JSONL input")->required();
  audit->add_option("--n", audit_n_, "Sample size")->check(CLI::PositiveNumber);
  audit->add_option("--out", out_path_, "Rating sheet CSV output")->required();

  if (args.empty()) {
    err_ << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out_ << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) cmd_ingest();
    if (generate->parsed()) cmd_generate();
    if (filter->parsed()) cmd_filter();
    if (exporter->parsed()) cmd_export();
    if (trainer->parsed()) cmd_train();
    if (evaluator->parsed()) cmd_eval();
    if (baseline->parsed()) cmd_baseline();
    if (fewshot->parsed()) cmd_fewshot();
    if (qg->parsed()) cmd_qg_eval();
    if (audit->parsed()) cmd_audit();
  } catch (const UsageError& e) {
    err_ << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BackendError& e) {
    err_ << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const Error& e) {
    err_ << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err_ << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  return runner.run(args);
}

}  // namespace qacg
