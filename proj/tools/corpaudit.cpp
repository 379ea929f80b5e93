// corpaudit: command-line front end.
//
// Every subcommand exits 0 on success. On failure it prints one JSON object
// {"error": kind, "message": text} to stderr and exits 1 (2 for usage errors).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "corpaudit/annotation_server.hpp"
#include "corpaudit/annotation_store.hpp"
#include "corpaudit/corpus_io.hpp"
#include "corpaudit/langid.hpp"
#include "corpaudit/langtags.hpp"
#include "corpaudit/report.hpp"
#include "corpaudit/sampling.hpp"
#include "corpaudit/stats.hpp"
#include "corpaudit/utf8.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace corpaudit;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::string kDataDir = CORPAUDIT_DATA_DIR;

std::string data_path(const std::string& rel) { return kDataDir + "/" + rel; }

std::ofstream open_out(const std::string& path) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Output to a file, or stdout when the path is empty or "-".
struct Sink {
  std::ofstream file;
  std::ostream* out;
  explicit Sink(const std::string& path) : out(&std::cout) {
    if (!path.empty() && path != "-") {
      file = open_out(path);
      out = &file;
    }
  }
  std::ostream& operator*() { return *out; }
};

// ---- sample ---------------------------------------------------------------

struct SampleArgs {
  std::string corpus;
  std::string kind = "mono";
  std::string lang, src_lang, tgt_lang, dataset;
  std::uint64_t n = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string sizes;
  std::size_t k = 0;
  std::vector<std::string> extra;
};

json item_json(std::uint64_t index, std::uint64_t line, const std::string& id,
               const std::string& lang, const std::string& src, const std::string* tgt) {
  json j{{"index", index}, {"line", line}, {"id", id}, {"lang", lang}, {"src", src}};
  if (tgt) j["tgt"] = *tgt;
  return j;
}

int run_sample(const SampleArgs& a) {
  if (!a.sizes.empty()) {
    auto sizes = sizes_for(load_sizes_csv(a.sizes), a.dataset);
    for (const auto& lang : select_languages(sizes, a.k, a.extra)) {
      std::cout << lang << '\t' << sizes.at(lang) << '\n';
    }
    return 0;
  }
  if (a.corpus.empty()) throw UsageError("sample needs --corpus (or --sizes for language selection)");
  const auto kind = parse_corpus_kind(a.kind);
  if (a.n == 0) throw UsageError("-n must be at least 1");
  Sink sink(a.out);
  const auto total = count_items(a.corpus, kind);
  std::string lang;
  std::vector<std::uint64_t> indices;
  if (kind == CorpusKind::monolingual) {
    if (a.lang.empty()) throw UsageError("monolingual sampling needs --lang");
    lang = a.lang;
    MonolingualReader reader(a.corpus, a.lang);
    auto s = draw_sample_stream(reader, total, {a.dataset, lang, total, kind}, a.n, a.seed);
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      const auto& it = s.items[i];
      *sink << item_json(i, s.selected_indices[i], it.id, it.lang, it.text, nullptr).dump()
            << '\n';
    }
    indices = s.selected_indices;
  } else {
    if (a.src_lang.empty() || a.tgt_lang.empty()) {
      throw UsageError("parallel sampling needs --src-lang and --tgt-lang");
    }
    lang = a.src_lang + "-" + a.tgt_lang;
    ParallelReader reader(a.corpus, a.src_lang, a.tgt_lang);
    auto s = draw_sample_stream(reader, total, {a.dataset, lang, total, kind}, a.n, a.seed);
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      const auto& it = s.items[i];
      *sink << item_json(i, s.selected_indices[i], it.id, lang, it.src_text, &it.tgt_text).dump()
            << '\n';
    }
    indices = s.selected_indices;
  }
  if (sink.out != &std::cout) {
    std::cout << json{{"corpus", a.corpus}, {"total", total}, {"requested_n", a.n},
                      {"seed", a.seed}, {"selected", indices.size()}}
                     .dump()
              << '\n';
  }
  return 0;
}

// ---- serve ----------------------------------------------------------------

int run_serve(std::string root, const std::string& host, int port) {
  if (root.empty()) {
    if (const char* env = std::getenv("CORPAUDIT_ROOT")) root = env;
  }
  if (root.empty()) throw UsageError("serve needs --root or CORPAUDIT_ROOT");
  AnnotationStore store(root);
  AnnotationServer server(store);
  std::cerr << json{{"listening", host + ":" + std::to_string(port)}, {"root", root}}.dump()
            << std::endl;
  if (!server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

// ---- stats ----------------------------------------------------------------

struct StatsArgs {
  std::vector<std::string> annotations;
  std::string sizes;
  std::string downstream;
  std::string out;
  std::string dataset;
  std::string rater;
  std::vector<double> cdf;
};

std::vector<std::string> expand_inputs(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(p)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".csv" || ext == ".jsonl")) {
          found.push_back(e.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(p);
    } else {
      throw std::runtime_error("no such input: " + p);
    }
  }
  if (out.empty()) throw UsageError("no annotation inputs found");
  return out;
}

// Per-language stats from export JSONL, grouped by dataset then language.
std::vector<StatsTable> tables_from_exports(const std::vector<std::string>& files,
                                            const std::string& dataset_override,
                                            const std::string& rater) {
  struct Group {
    CorpusKind kind = CorpusKind::monolingual;
    std::vector<AnnotationRecord> records;
    std::vector<std::size_t> lengths;
  };
  std::map<std::string, std::map<std::string, Group>> groups;
  for (const auto& f : files) {
    for (auto& e : read_export_jsonl(f)) {
      if (!rater.empty() && e.record.rater_id != rater) continue;
      auto& g = groups[dataset_override.empty() ? e.corpus : dataset_override][e.lang];
      if (e.tgt) g.kind = CorpusKind::parallel;
      g.lengths.push_back(utf8::length(e.src));
      g.records.push_back(std::move(e.record));
    }
  }
  std::vector<StatsTable> out;
  for (auto& [dataset, langs] : groups) {
    StatsTable t;
    t.dataset = dataset;
    for (auto& [lang, g] : langs) {
      if (g.kind == CorpusKind::parallel) t.kind = CorpusKind::parallel;
    }
    for (auto& [lang, g] : langs) {
      auto s = per_language_stats(g.records, t.kind, g.lengths);
      s.dataset = dataset;
      s.lang = lang;
      t.rows.push_back(std::move(s));
    }
    out.push_back(std::move(t));
  }
  return out;
}

ReportInputs load_inputs(const std::vector<std::string>& annotation_paths,
                         const std::string& dataset, const std::string& rater,
                         const std::string& sizes_path, const std::string& downstream_path,
                         const std::vector<double>& cdf) {
  ReportInputs in;
  std::vector<std::string> jsonl;
  for (const auto& f : expand_inputs(annotation_paths)) {
    if (fs::path(f).extension() == ".csv") {
      in.tables.push_back(load_stats_table(f));
    } else {
      jsonl.push_back(f);
    }
  }
  if (!jsonl.empty()) {
    for (auto& t : tables_from_exports(jsonl, dataset, rater)) in.tables.push_back(std::move(t));
  }
  if (!sizes_path.empty()) {
    const auto rows = load_sizes_csv(sizes_path);
    for (const auto& t : in.tables) {
      bool mentioned = false;
      for (const auto& r : rows) mentioned |= dataset_key(r.dataset) == dataset_key(t.dataset);
      if (mentioned) in.sizes[dataset_key(t.dataset)] = sizes_for(rows, t.dataset);
    }
  }
  if (!downstream_path.empty()) in.downstream = load_downstream_csv(downstream_path);
  in.cdf_thresholds = cdf;
  return in;
}

int run_stats(const StatsArgs& a) {
  auto inputs = load_inputs(a.annotations, a.dataset, a.rater, a.sizes, a.downstream, a.cdf);
  json written = json::array();
  for (const auto& p : write_report(a.out, inputs)) written.push_back(p.string());
  std::cout << json{{"written", written}}.dump() << '\n';
  return 0;
}

// ---- agreement ------------------------------------------------------------

std::vector<AnnotationRecord> records_of(const std::string& path, const std::string& rater) {
  std::vector<AnnotationRecord> out;
  for (auto& e : read_export_jsonl(path)) {
    if (rater.empty() || e.record.rater_id == rater) out.push_back(std::move(e.record));
  }
  return out;
}

int run_agreement(const std::string& ref, const std::string& other, const std::vector<int>& ns,
                  const std::string& ref_rater, const std::string& other_rater) {
  const auto a = records_of(ref, ref_rater);
  const auto b = records_of(other, other_rater);
  const std::vector<int> grans = ns.empty() ? std::vector<int>{2, 4, 6} : ns;
  for (int n : grans) {
    const double acc = agreement_accuracy(a, b, parse_granularity(n));
    std::cout << "Acc-" << n << '\t' << std::fixed << std::setprecision(2) << acc << '\n';
  }
  return 0;
}

// ---- codes ----------------------------------------------------------------

struct CodesArgs {
  std::string dataset;
  std::string list;
  std::string rules = data_path("codes/rules.tsv");
  std::string iso = data_path("codes/iso639.tsv");
  std::string format = "csv";
  std::string out;
};

int run_codes(const CodesArgs& a) {
  const auto rules = RulesDatabase::load(a.rules);
  const auto registry = Iso639Registry::load(a.iso);
  const auto report = lint_codes(rules, read_code_list(a.list), a.dataset, &registry);
  Sink sink(a.out);
  if (a.format == "md") {
    write_lint_markdown(*sink, report);
  } else {
    write_lint_csv(*sink, report);
  }
  json summary{{"dataset", a.dataset},
               {"codes", report.codes.size()},
               {"findings", report.findings.size()},
               {"nonstandard_codes", report.nonstandard_codes()},
               {"superset_conflicts", report.count(IssueCategory::SUPERSET_AMBIGUOUS)},
               {"warnings", report.warnings}};
  std::cerr << summary.dump() << '\n';
  return 0;
}

// ---- langid ---------------------------------------------------------------

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> out;
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (!utf8::trim(line).empty()) out.push_back(line);
  }
  return out;
}

struct LangIdArgs {
  std::vector<std::string> train_inputs;  // lang=path
  std::string model;
  std::string out;
  LangIdOptions options;
  std::vector<std::string> texts;
  std::string input;
  std::string pairs, src_lang, tgt_lang, dataset;
  std::string rules;
  std::string decisions, annotations;
  std::string rater;
};

int run_langid_train(const LangIdArgs& a) {
  std::vector<std::pair<std::string, std::vector<std::string>>> corpora;
  for (const auto& spec : a.train_inputs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--input must be LANG=PATH: " + spec);
    corpora.emplace_back(spec.substr(0, eq), read_lines(spec.substr(eq + 1)));
  }
  const auto model = LangIdModel::train(corpora, a.options);
  model.save_file(a.out);
  std::cout << json{{"model", a.out}, {"languages", model.languages()},
                    {"vocabulary", model.vocabulary_size()}}
                   .dump()
            << '\n';
  return 0;
}

int run_langid_predict(const LangIdArgs& a) {
  const auto model = LangIdModel::load_file(a.model);
  std::vector<std::string> texts = a.texts;
  if (!a.input.empty()) {
    for (auto& l : read_lines(a.input)) texts.push_back(std::move(l));
  }
  if (texts.empty()) throw UsageError("nothing to classify: give TEXT arguments or --input");
  for (const auto& t : texts) {
    const auto p = model.predict(t);
    std::cout << (p.low_confidence ? p.lang + "?" : p.lang) << '\t' << std::fixed
              << std::setprecision(4) << p.score << '\t' << t << '\n';
  }
  return 0;
}

int run_langid_filter(const LangIdArgs& a) {
  const auto model = LangIdModel::load_file(a.model);
  const auto pairs = read_parallel(a.pairs, a.src_lang, a.tgt_lang).pairs;
  std::optional<RulesDatabase> rules;
  if (!a.rules.empty()) rules = RulesDatabase::load(a.rules);
  const auto decisions = filter_corpus(model, pairs, rules ? &*rules : nullptr, a.dataset);
  Sink sink(a.out);
  write_decisions(*sink, decisions);
  return 0;
}

int run_langid_eval(const LangIdArgs& a) {
  const auto decisions = read_decisions(a.decisions);
  std::map<std::string, AnnotationRecord> annotations;
  for (auto& e : read_export_jsonl(a.annotations)) {
    if (!a.rater.empty() && e.record.rater_id != a.rater) continue;
    if (!annotations.emplace(e.id, e.record).second) {
      throw UsageError("item " + e.id + " has several raters; pick one with --rater");
    }
  }
  const auto metrics = filter_eval(annotations, decisions);
  Sink sink(a.out);
  write_filter_report(*sink, metrics);
  return 0;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> tables = {data_path("audit")};
  std::string sizes;
  std::string downstream;
  std::string lists;
  std::string rules = data_path("codes/rules.tsv");
  std::string iso = data_path("codes/iso639.tsv");
  std::string out;
  std::vector<double> cdf;
};

int run_report(const ReportArgs& a) {
  auto inputs = load_inputs(a.tables, {}, {}, a.sizes, a.downstream, a.cdf);
  if (!a.lists.empty()) {
    const auto rules = RulesDatabase::load(a.rules);
    const auto registry = Iso639Registry::load(a.iso);
    std::vector<fs::path> lists;
    for (const auto& e : fs::directory_iterator(a.lists)) {
      if (e.path().extension() == ".txt") lists.push_back(e.path());
    }
    std::sort(lists.begin(), lists.end());
    for (const auto& p : lists) {
      inputs.lints.push_back(
          lint_codes(rules, read_code_list(p.string()), p.stem().string(), &registry));
    }
  }
  json written = json::array();
  for (const auto& p : write_report(a.out, inputs)) written.push_back(p.string());
  std::cout << json{{"written", written}}.dump() << '\n';
  return 0;
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpaudit: audit the quality of multilingual web corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "corpaudit 1.0");

  SampleArgs sample;
  auto* cmd_sample = app.add_subcommand(
      "sample", "Draw a reproducible audit sample (or select audit languages with --sizes)");
  auto* o_corpus = cmd_sample->add_option("--corpus", sample.corpus,
                                          "Corpus file (.txt/.tsv, optionally .gz)");
  cmd_sample->add_option("--kind", sample.kind, "mono or parallel")
      ->check(CLI::IsMember({"mono", "monolingual", "parallel"}))
      ->capture_default_str();
  cmd_sample->add_option("--lang", sample.lang, "Declared language (monolingual)");
  cmd_sample->add_option("--src-lang", sample.src_lang, "Declared source language (parallel)");
  cmd_sample->add_option("--tgt-lang", sample.tgt_lang, "Declared target language (parallel)");
  cmd_sample->add_option("-n", sample.n, "Sample size")->capture_default_str();
  cmd_sample->add_option("--seed", sample.seed, "Random seed (SplitMix64)")->capture_default_str();
  cmd_sample->add_option("--out", sample.out, "Output JSONL (default stdout)");
  auto* o_sizes = cmd_sample->add_option("--sizes", sample.sizes,
                                         "Sizes CSV (dataset,lang,sentences): select languages");
  cmd_sample->add_option("--dataset", sample.dataset, "Dataset name (filters --sizes rows)");
  cmd_sample->add_option("-k", sample.k, "Number of smallest languages to select")
      ->capture_default_str();
  cmd_sample->add_option("--extra", sample.extra, "Languages to add to the selection")
      ->delimiter(',');
  o_corpus->excludes(o_sizes);

  std::string serve_root;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* cmd_serve = app.add_subcommand("serve", "Run the annotation HTTP service");
  cmd_serve->add_option("--root", serve_root,
                        "Project directory (default: $CORPAUDIT_ROOT)");
  cmd_serve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  cmd_serve->add_option("--port", serve_port, "Port")->capture_default_str();

  StatsArgs stats;
  auto* cmd_stats = app.add_subcommand("stats", "Per-language and aggregate statistics");
  cmd_stats->add_option("--annotations", stats.annotations,
                        "Export JSONL files, stats CSV tables, or directories of them")
      ->required();
  cmd_stats->add_option("--sizes", stats.sizes, "Sizes CSV (dataset,lang,sentences)");
  cmd_stats->add_option("--downstream", stats.downstream, "spBLEU CSV (lang,spbleu)");
  cmd_stats->add_option("--out", stats.out, "Output directory")->required();
  cmd_stats->add_option("--dataset", stats.dataset, "Dataset name for JSONL input");
  cmd_stats->add_option("--rater", stats.rater, "Use only this rater's JSONL records");
  cmd_stats->add_option("--cdf", stats.cdf, "CDF thresholds in percent (default 0,10,...,100)")
      ->delimiter(',');

  std::string agree_ref, agree_other, ref_rater, other_rater;
  std::vector<int> agree_n;
  auto* cmd_agree = app.add_subcommand("agreement", "Acc-n between two annotation exports");
  cmd_agree->add_option("--ref", agree_ref, "Reference (expert) export JSONL")->required();
  cmd_agree->add_option("--other", agree_other, "Other export JSONL")->required();
  cmd_agree->add_option("-n", agree_n, "Granularity 2, 4 or 6 (repeatable; default all)")
      ->check(CLI::IsMember({2, 4, 6}));
  cmd_agree->add_option("--ref-rater", ref_rater, "Rater id to take from --ref");
  cmd_agree->add_option("--other-rater", other_rater, "Rater id to take from --other");

  CodesArgs codes;
  auto* cmd_codes = app.add_subcommand("codes", "Lint a dataset's language codes");
  cmd_codes->add_option("--dataset", codes.dataset, "Dataset name")->required();
  cmd_codes->add_option("--list", codes.list, "Code list, one per line")->required();
  cmd_codes->add_option("--rules", codes.rules, "Rules database")->capture_default_str();
  cmd_codes->add_option("--iso", codes.iso, "ISO 639 snapshot")->capture_default_str();
  cmd_codes->add_option("--format", codes.format, "csv or md")
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();
  cmd_codes->add_option("--out", codes.out, "Output file (default stdout)");

  LangIdArgs lid;
  auto* cmd_langid = app.add_subcommand("langid", "Train, apply and evaluate the n-gram LangID");
  cmd_langid->require_subcommand(1);
  auto* lid_train = cmd_langid->add_subcommand("train", "Train a model");
  lid_train->add_option("--input", lid.train_inputs, "LANG=PATH training file (repeatable)")
      ->required();
  lid_train->add_option("--alpha", lid.options.alpha, "Add-alpha smoothing")->capture_default_str();
  lid_train->add_option("--order", lid.options.max_order, "Highest n-gram order")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  lid_train->add_option("--min-length", lid.options.min_text_length,
                        "Shorter texts are low-confidence")
      ->capture_default_str();
  lid_train->add_option("--min-chars", lid.options.min_training_chars,
                        "Minimum training characters per language")
      ->capture_default_str();
  lid_train->add_option("--out", lid.out, "Model file")->required();

  auto* lid_predict = cmd_langid->add_subcommand("predict", "Classify texts");
  lid_predict->add_option("--model", lid.model, "Model file")->required();
  lid_predict->add_option("--input", lid.input, "File with one text per line");
  lid_predict->add_option("text", lid.texts, "Texts to classify");

  auto* lid_filter = cmd_langid->add_subcommand("filter", "Keep pairs predicted as declared");
  lid_filter->add_option("--model", lid.model, "Model file")->required();
  lid_filter->add_option("--pairs", lid.pairs, "Parallel TSV")->required();
  lid_filter->add_option("--src-lang", lid.src_lang, "Declared source language")->required();
  lid_filter->add_option("--tgt-lang", lid.tgt_lang, "Declared target language")->required();
  lid_filter->add_option("--dataset", lid.dataset, "Dataset name for code corrections");
  lid_filter->add_option("--rules", lid.rules, "Rules database for declared-tag corrections");
  lid_filter->add_option("--out", lid.out, "Decisions CSV (default stdout)");

  auto* lid_eval = cmd_langid->add_subcommand("eval", "Score filter decisions against labels");
  lid_eval->add_option("--decisions", lid.decisions, "Decisions CSV from 'langid filter'")
      ->required();
  lid_eval->add_option("--annotations", lid.annotations, "Export JSONL")->required();
  lid_eval->add_option("--rater", lid.rater, "Rater id when the export has several");
  lid_eval->add_option("--out", lid.out, "Metrics CSV (default stdout)");

  ReportArgs report;
  auto* cmd_report = app.add_subcommand("report", "Full report bundle from audit tables");
  cmd_report->add_option("--tables", report.tables, "Stats CSV tables or directories")
      ->capture_default_str();
  cmd_report->add_option("--sizes", report.sizes, "Sizes CSV (dataset,lang,sentences)");
  cmd_report->add_option("--downstream", report.downstream, "spBLEU CSV (lang,spbleu)");
  cmd_report->add_option("--lists", report.lists,
                         "Directory of <dataset>.txt code lists to lint");
  cmd_report->add_option("--rules", report.rules, "Rules database")->capture_default_str();
  cmd_report->add_option("--iso", report.iso, "ISO 639 snapshot")->capture_default_str();
  cmd_report->add_option("--out", report.out, "Output directory")->required();
  cmd_report->add_option("--cdf", report.cdf, "CDF thresholds in percent")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*cmd_sample) return run_sample(sample);
    if (*cmd_serve) return run_serve(serve_root, serve_host, serve_port);
    if (*cmd_stats) return run_stats(stats);
    if (*cmd_agree) return run_agreement(agree_ref, agree_other, agree_n, ref_rater, other_rater);
    if (*cmd_codes) return run_codes(codes);
    if (*lid_train) return run_langid_train(lid);
    if (*lid_predict) return run_langid_predict(lid);
    if (*lid_filter) return run_langid_filter(lid);
    if (*lid_eval) return run_langid_eval(lid);
    if (*cmd_report) return run_report(report);
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return 2;
  } catch (const CorpusError& e) {
    print_error("corpus", e.what());
  } catch (const StoreError& e) {
    print_error(e.code(), e.what());
  } catch (const StatsError& e) {
    print_error("stats", e.what());
  } catch (const LabelError& e) {
    print_error("label", e.what());
  } catch (const LangIdError& e) {
    print_error("langid", e.what());
  } catch (const TagError& e) {
    print_error("tag", e.what());
  } catch (const std::exception& e) {
    print_error("error", e.what());
  }
  return 1;
}
