#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <unordered_map>

#include "CLI11.hpp"
#include "lunar/backend.hpp"
#include "lunar/csv.hpp"
#include "lunar/generator.hpp"
#include "lunar/ingest.hpp"
#include "lunar/metrics.hpp"
#include "lunar/parser_core.hpp"
#include "lunar/sharder.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lunar;

struct ParseArgs {
  std::string input;
  std::string format = "plain";
  std::string out_dir = "lunar_out";
  std::size_t top_k = 3;
  std::size_t min_bucket = 100;
  std::size_t lcu_size = 3;
  double min_sim = 0.33;
  double lambda = 0.7;
  std::size_t workers = 8;
  std::uint64_t seed = 0;
  std::string backend = "mock";
  std::string endpoint;
  std::string model = "gpt-3.5-turbo";
  std::string api_key;
  std::string mock_oracle;
  std::string examples_path;
  bool dump_buckets = false;
};

struct EvaluateArgs {
  std::string input;
  std::string truth;
  std::string out_dir = "lunar_out";
};

struct GenerateArgs {
  std::string out_dir = "lunar_out";
  GeneratorConfig cfg;
};

std::unordered_map<LineId, std::string> oracle_map(const std::string& path) {
  const GroundTruth truth = load_ground_truth(path);
  std::unordered_map<LineId, std::string> map;
  map.reserve(truth.templates.size());
  for (LineId line = 0; line < truth.templates.size(); ++line) {
    map.emplace(line, truth.templates[line]);
  }
  return map;
}

int cmd_parse(const ParseArgs& args) {
  const auto started = std::chrono::steady_clock::now();

  const LogFormat format = args.format == "csv" ? LogFormat::kStructuredCsv
                                                : LogFormat::kPlain;
  const LogSet logs = load_logs(args.input, format);

  ParserConfig cfg;
  cfg.top_k = args.top_k;
  cfg.max_bucket = args.min_bucket;
  cfg.selector.lcu_size = args.lcu_size;
  cfg.selector.pool_per_level = args.lcu_size;
  cfg.selector.min_similarity = args.min_sim;
  cfg.selector.lambda = args.lambda;
  cfg.workers = args.workers;
  cfg.seed = args.seed;
  if (!args.examples_path.empty()) {
    cfg.examples = load_parameter_examples(args.examples_path);
  }

  fs::create_directories(args.out_dir);
  cfg.recovery_path = (fs::path(args.out_dir) / "recovery.csv").string();

  std::unique_ptr<Backend> backend;
  if (args.backend == "mock") {
    if (args.mock_oracle.empty()) {
      throw ConfigError("mock backend requires --mock-oracle");
    }
    backend = std::make_unique<MockBackend>(oracle_map(args.mock_oracle));
  } else {
    BackendConfig bc;
    bc.kind = BackendKind::kHttp;
    bc.endpoint = args.endpoint;
    bc.model_name = args.model;
    bc.api_key = args.api_key;
    bc.max_in_flight = args.workers;
    backend = std::make_unique<HttpBackend>(bc);  // rejects empty endpoint
  }

  const ShardIndex index = build_shard_index(logs, cfg.top_k, cfg.max_bucket);
  if (args.dump_buckets) {
    for (const auto& [token_count, group] : index.groups) {
      for (const Bucket& bucket : group.buckets) {
        std::cout << "bucket: length=" << token_count << " signature=";
        for (std::size_t i = 0; i < bucket.signature.size(); ++i) {
          if (i > 0) std::cout << '|';
          std::cout << bucket.signature[i];
        }
        std::cout << " members=" << bucket.member_ids.size() << "\n";
      }
    }
  }

  ParseResult result;
  try {
    result = parse_all(logs, index, cfg, *backend);
  } catch (const std::exception& e) {
    std::cerr << "parse failed: " << e.what() << "\n"
              << "partial results: " << cfg.recovery_path << "\n";
    return 1;
  }

  const auto assignments = fs::path(args.out_dir) / "assignments.csv";
  const auto templates = fs::path(args.out_dir) / "templates.csv";
  write_assignments(assignments.string(), result);
  write_templates(templates.string(), result.store);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  std::cout << "lines: " << logs.size() << "\n"
            << "length_groups: " << index.groups.size() << "\n"
            << "templates: " << result.store.size() << "\n"
            << "iterations: " << result.stats.iterations << "\n"
            << "backend_calls: " << result.stats.queries << "\n"
            << "fallbacks: " << result.stats.fallbacks << "\n"
            << "wall_seconds: " << wall << "\n"
            << "assignments: " << assignments.string() << "\n"
            << "templates_file: " << templates.string() << "\n";
  return 0;
}

/// Prediction files from cmd_parse group by TemplateId; files from other
/// tools group by their template string column.
Labeling load_predictions(const std::string& path) {
  const CsvTable table = read_csv(path);
  const auto id_col = table.column("TemplateId");
  const auto text_col = table.column("TemplateText");
  if (id_col && text_col) {
    Labeling labeling;
    std::unordered_map<std::string, std::size_t> groups;
    for (const auto& row : table.rows) {
      const std::string& key = row[*id_col];
      auto [it, inserted] = groups.try_emplace(
          key, labeling.template_of_group.size());
      if (inserted) labeling.template_of_group.push_back(row[*text_col]);
      labeling.group_of_line.push_back(it->second);
    }
    return labeling;
  }
  const auto event_col = table.column("EventTemplate");
  if (!event_col) {
    throw FormatError(path +
                      ": need TemplateId+TemplateText or EventTemplate "
                      "columns");
  }
  std::vector<std::string> per_line;
  per_line.reserve(table.rows.size());
  for (const auto& row : table.rows) per_line.push_back(row[*event_col]);
  return labeling_from_templates(per_line);
}

int cmd_evaluate(const EvaluateArgs& args) {
  const Labeling predicted = load_predictions(args.input);
  const GroundTruth truth = load_ground_truth(args.truth);
  const Labeling oracle = labeling_from_templates(truth.templates);

  const EvaluationReport report = evaluate(predicted, oracle);

  fs::create_directories(args.out_dir);
  const auto text_path = fs::path(args.out_dir) / "report.txt";
  {
    std::ofstream out(text_path);
    if (!out) throw IoError("cannot write report to " + text_path.string());
    write_report_text(out, report);
  }
  write_report_json((fs::path(args.out_dir) / "report.json").string(),
                    report);
  write_report_rows((fs::path(args.out_dir) / "breakdown.csv").string(),
                    report);

  write_report_text(std::cout, report);
  return 0;
}

int cmd_generate(const GenerateArgs& args) {
  const SyntheticCorpus corpus = generate_corpus(args.cfg);
  fs::create_directories(args.out_dir);
  const auto log_path = fs::path(args.out_dir) / "synthetic.log";
  const auto truth_path = fs::path(args.out_dir) / "truth.csv";
  write_corpus(corpus, log_path.string(), truth_path.string());
  std::cout << "lines: " << corpus.lines.size() << "\n"
            << "log_file: " << log_path.string() << "\n"
            << "truth_file: " << truth_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised log template mining and evaluation"};
  app.require_subcommand(1);

  ParseArgs pa;
  CLI::App* parse = app.add_subcommand("parse", "Mine templates from a log");
  parse->set_config("--config", "",
                    "Config file with key=value lines named after flags");
  parse->add_option("--input", pa.input, "Log file to parse")->required();
  parse->add_option("--format", pa.format, "Input format")
      ->check(CLI::IsMember({"plain", "csv"}))
      ->capture_default_str();
  parse->add_option("--out", pa.out_dir, "Output directory")
      ->capture_default_str();
  parse->add_option("--k", pa.top_k, "Top-k tokens in bucket signatures")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
      ->capture_default_str();
  parse
      ->add_option("--min-bucket", pa.min_bucket,
                   "Cluster size at which agglomerative merging stops")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30))
      ->capture_default_str();
  parse->add_option("--lcu-size", pa.lcu_size, "Logs per model query (m)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
      ->capture_default_str();
  parse
      ->add_option("--min-sim", pa.min_sim,
                   "Similarity floor for pool candidates (s)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  parse
      ->add_option("--lambda", pa.lambda,
                   "Variability weight in the hybrid score")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  parse->add_option("--workers", pa.workers, "Parallel length-group workers")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
      ->capture_default_str();
  parse->add_option("--seed", pa.seed, "Run seed")->capture_default_str();
  parse->add_option("--backend", pa.backend, "Model backend")
      ->check(CLI::IsMember({"mock", "http"}))
      ->capture_default_str();
  parse->add_option("--endpoint", pa.endpoint,
                    "Chat-completion URL (http backend)");
  parse->add_option("--model", pa.model, "Model name sent to the backend")
      ->capture_default_str();
  parse->add_option("--api-key", pa.api_key, "Bearer token for the backend")
      ->envname("LUNAR_API_KEY");
  parse->add_option("--mock-oracle", pa.mock_oracle,
                    "Ground-truth CSV answering mock queries");
  parse->add_option("--examples", pa.examples_path,
                    "JSON file of parameter examples for the prompt");
  parse->add_flag("--dump-buckets", pa.dump_buckets,
                  "Print one line per bucket before parsing");

  EvaluateArgs ea;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score predictions against an oracle");
  evaluate->add_option("--input", ea.input, "Predicted assignments CSV")
      ->required();
  evaluate->add_option("--truth", ea.truth, "Oracle CSV with EventTemplate")
      ->required();
  evaluate->add_option("--out", ea.out_dir, "Output directory")
      ->capture_default_str();

  GenerateArgs ga;
  CLI::App* generate =
      app.add_subcommand("generate", "Emit a synthetic corpus with oracle");
  generate->add_option("--out", ga.out_dir, "Output directory")
      ->capture_default_str();
  generate->add_option("--templates", ga.cfg.templates, "Template count")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
      ->capture_default_str();
  generate
      ->add_option("--logs-per-template", ga.cfg.logs_per_template,
                   "Lines generated per template")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
      ->capture_default_str();
  generate->add_option("--seed", ga.cfg.seed, "Corpus seed")
      ->capture_default_str();
  generate
      ->add_option("--min-length", ga.cfg.min_length,
                   "Shortest template token count")
      ->check(CLI::Range(std::size_t{3}, std::size_t{1000}))
      ->capture_default_str();
  generate
      ->add_option("--max-length", ga.cfg.max_length,
                   "Longest template token count")
      ->check(CLI::Range(std::size_t{3}, std::size_t{1000}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) return cmd_parse(pa);
    if (evaluate->parsed()) return cmd_evaluate(ea);
    if (generate->parsed()) return cmd_generate(ga);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
