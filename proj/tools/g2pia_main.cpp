// Command-line entry points: attack, evaluate, sweep, transfer, verify-theory.

#include "g2pia/clients_http.hpp"
#include "g2pia/dataset.hpp"
#include "g2pia/report.hpp"
#include "g2pia/rng.hpp"
#include "g2pia/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace g2pia;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPropertyFailure = 3;

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

struct RunConfig {
  // dataset
  std::string dataset_path;
  std::string dataset_format = "generic_qa_jsonl";
  int sample_limit = 0;  // 0 = all
  // resources
  std::string lexicon_path;
  std::string vectors_path;
  std::string oov_policy = "fail";
  // victim
  std::string victim_kind = "mock";  // mock | remote
  std::string victim_spec;           // mock spec JSON path
  std::string victim_url;
  std::string victim_model;
  // assistant
  std::string assistant_kind = "echo";  // echo | remote
  std::string assistant_url;
  std::string assistant_model;
  double assistant_temperature = 0.0;
  // embedder
  std::string embedder_kind = "local";  // local | remote
  std::string embedder_url;
  std::string embedder_model;
  // generation
  GenerationConfig gen;
  std::string position = "end";
  // run
  int workers = 1;
  uint64_t seed = 0;
  std::string out_dir = ".";

  json resolved() const {
    // Secrets stay in the environment; everything else is embedded so a run
    // can be reproduced with mocks.
    return json{
        {"dataset",
         {{"path", dataset_path},
          {"format", dataset_format},
          {"sample_limit", sample_limit}}},
        {"resources",
         {{"lexicon", lexicon_path},
          {"vectors", vectors_path},
          {"oov_policy", oov_policy}}},
        {"victim",
         {{"kind", victim_kind},
          {"spec", victim_spec},
          {"url", victim_url},
          {"model", victim_model}}},
        {"assistant",
         {{"kind", assistant_kind},
          {"url", assistant_url},
          {"model", assistant_model},
          {"temperature", assistant_temperature}}},
        {"embedder",
         {{"kind", embedder_kind},
          {"url", embedder_url},
          {"model", embedder_model}}},
        {"generation",
         {{"gamma", gen.gamma},
          {"delta", gen.delta},
          {"epsilon", gen.epsilon},
          {"max_iterations", gen.max_iterations},
          {"max_coreword_tries", gen.max_coreword_tries},
          {"position", position},
          {"prompt_template", gen.prompt_template}}},
        {"workers", workers},
        {"seed", seed}};
  }
};

OovPolicy parse_oov(const std::string& s) {
  if (s == "fail") return OovPolicy::Fail;
  if (s == "skip") return OovPolicy::SkipWord;
  if (s == "subword") return OovPolicy::SubwordMean;
  throw CLI::ValidationError("--oov", "must be fail|skip|subword");
}

/// Loaded resources plus client instances for one run.
struct Runtime {
  HeuristicTagger tagger;
  SynonymLexicon lexicon;
  WordVectorTable vectors;
  std::unique_ptr<TextEmbedder> embedder;
  std::unique_ptr<AssistantClient> assistant;
  std::unique_ptr<VictimClient> victim;
  std::unique_ptr<TextEmbedder> victim_embedder;

  AttackDeps deps() {
    return AttackDeps{&tagger, &lexicon, &vectors, assistant.get(),
                      embedder.get()};
  }
};

std::unique_ptr<VictimClient> make_mock_victim(const std::string& spec_path,
                                               TextEmbedder* embedder) {
  std::ifstream in(spec_path);
  if (!in) {
    throw std::runtime_error("cannot open mock victim spec: " + spec_path);
  }
  json spec;
  in >> spec;
  std::vector<EmbeddingVector> candidates;
  for (const auto& row : spec.at("candidates")) {
    Vector v(row.size());
    for (size_t i = 0; i < row.size(); ++i) v[i] = row[i].get<double>();
    candidates.emplace_back(v);
  }
  std::vector<std::string> answers =
      spec.at("answers").get<std::vector<std::string>>();
  CovarianceModel sigma = [&] {
    if (spec.contains("variances")) {
      const auto var = spec["variances"].get<std::vector<double>>();
      return CovarianceModel::diagonal(
          Eigen::Map<const Vector>(var.data(), static_cast<long>(var.size())));
    }
    const auto rows = spec.at("matrix").get<std::vector<std::vector<double>>>();
    Matrix m(rows.size(), rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return CovarianceModel::dense(m);
  }();
  return std::make_unique<MockGaussianVictim>(
      DiscreteCandidateSet(std::move(candidates)), std::move(answers),
      std::move(sigma), embedder);
}

Runtime build_runtime(const RunConfig& cfg, bool needs_victim) {
  Runtime rt;
  if (!cfg.lexicon_path.empty()) {
    rt.lexicon = SynonymLexicon::load(cfg.lexicon_path);
  }
  if (!cfg.vectors_path.empty()) {
    rt.vectors = WordVectorTable::load(cfg.vectors_path, parse_oov(cfg.oov_policy));
  }

  if (cfg.embedder_kind == "local") {
    rt.embedder = std::make_unique<MeanPooledEmbedder>(&rt.vectors);
  } else if (cfg.embedder_kind == "remote") {
    rt.embedder = std::make_unique<RemoteEmbedder>(HttpClientOptions{
        cfg.embedder_url, cfg.embedder_model,
        env_or_empty("G2PIA_EMBEDDER_API_KEY")});
  } else {
    throw std::runtime_error("unknown embedder kind: " + cfg.embedder_kind);
  }

  if (cfg.assistant_kind == "echo") {
    rt.assistant = std::make_unique<EchoAssistant>();
  } else if (cfg.assistant_kind == "remote") {
    HttpClientOptions opts{cfg.assistant_url, cfg.assistant_model,
                           env_or_empty("G2PIA_ASSISTANT_API_KEY")};
    opts.temperature = cfg.assistant_temperature;
    rt.assistant = std::make_unique<ChatCompletionsClient>(std::move(opts));
  } else {
    throw std::runtime_error("unknown assistant kind: " + cfg.assistant_kind);
  }

  if (needs_victim) {
    if (cfg.victim_kind == "mock") {
      rt.victim_embedder = std::make_unique<MeanPooledEmbedder>(&rt.vectors);
      rt.victim = make_mock_victim(cfg.victim_spec, rt.victim_embedder.get());
    } else if (cfg.victim_kind == "remote") {
      rt.victim = std::make_unique<RemoteVictim>(HttpClientOptions{
          cfg.victim_url, cfg.victim_model,
          env_or_empty("G2PIA_VICTIM_API_KEY")});
    } else {
      throw std::runtime_error("unknown victim kind: " + cfg.victim_kind);
    }
  }
  return rt;
}

std::vector<double> parse_grid(const std::vector<double>& values,
                               const char* flag) {
  if (values.empty()) {
    throw std::runtime_error(std::string(flag) + " needs at least one value");
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box prompt injection attack toolkit"};
  app.require_subcommand(1);
  app.set_config("--config")->check(CLI::ExistingFile);

  RunConfig cfg;
  app.add_option("--dataset", cfg.dataset_path, "Dataset file");
  app.add_option("--format", cfg.dataset_format,
                 "gsm8k_jsonl|squad2_json|generic_qa_jsonl");
  app.add_option("--limit", cfg.sample_limit, "Uniform subsample size (0 = all)");
  app.add_option("--lexicon", cfg.lexicon_path, "Synonym lexicon TSV");
  app.add_option("--vectors", cfg.vectors_path, "Word vector table");
  app.add_option("--oov", cfg.oov_policy, "OOV policy: fail|skip|subword");
  app.add_option("--victim", cfg.victim_kind, "mock|remote");
  app.add_option("--victim-spec", cfg.victim_spec, "Mock victim spec JSON");
  app.add_option("--victim-url", cfg.victim_url, "Victim endpoint base URL");
  app.add_option("--victim-model", cfg.victim_model, "Victim model name");
  app.add_option("--assistant", cfg.assistant_kind, "echo|remote");
  app.add_option("--assistant-url", cfg.assistant_url, "Assistant base URL");
  app.add_option("--assistant-model", cfg.assistant_model, "Assistant model");
  app.add_option("--temperature", cfg.assistant_temperature,
                 "Assistant sampling temperature");
  app.add_option("--embedder", cfg.embedder_kind, "local|remote");
  app.add_option("--embedder-url", cfg.embedder_url, "Embedder base URL");
  app.add_option("--embedder-model", cfg.embedder_model, "Embedder model");
  app.add_option("--gamma", cfg.gen.gamma, "Cosine target");
  app.add_option("--delta", cfg.gen.delta, "Cosine band half-width");
  app.add_option("--epsilon", cfg.gen.epsilon, "Semantic distance threshold");
  app.add_option("--iterations", cfg.gen.max_iterations, "Generation loop bound N");
  app.add_option("--coreword-tries", cfg.gen.max_coreword_tries,
                 "Synonym search budget per iteration");
  app.add_option("--position", cfg.position,
                 "Insertion position: end|random|after_sentence:k");
  app.add_option("--template", cfg.gen.prompt_template, "Prompt template");
  app.add_option("--workers", cfg.workers, "Concurrent campaign workers");
  app.add_option("--seed", cfg.seed, "Run seed");
  app.add_option("--out-dir", cfg.out_dir, "Output directory");

  auto* cmd_attack =
      app.add_subcommand("attack", "Generate attack prompts for a dataset");
  auto* cmd_evaluate =
      app.add_subcommand("evaluate", "Run a clean-vs-attacked campaign");
  auto* cmd_sweep = app.add_subcommand("sweep", "Epsilon/gamma parameter grid");
  std::vector<double> sweep_eps, sweep_gamma;
  cmd_sweep->add_option("--eps-values", sweep_eps, "Epsilon grid values");
  cmd_sweep->add_option("--gamma-values", sweep_gamma, "Gamma grid values");
  auto* cmd_transfer =
      app.add_subcommand("transfer", "Replay attack sets across victims");
  std::vector<std::string> attack_sets_arg, victim_specs_arg;
  cmd_transfer->add_option("--attack-set", attack_sets_arg,
                           "name=prompts.jsonl (repeatable)");
  cmd_transfer->add_option("--victim-mock", victim_specs_arg,
                           "name=spec.json (repeatable)");
  auto* cmd_verify =
      app.add_subcommand("verify-theory", "Run the theory property suite");
  std::string verify_out;
  int verify_kl_instances = 50;
  cmd_verify->add_option("--report", verify_out, "Write the JSON report here");
  cmd_verify->add_option("--kl-instances", verify_kl_instances,
                         "Random instances for the KL grid check");

  // Shared options live on the top-level app; let them appear after the
  // subcommand name as well.
  for (auto* sub : {cmd_attack, cmd_evaluate, cmd_sweep, cmd_transfer,
                    cmd_verify}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    cfg.gen.position = parse_insertion_position(cfg.position);
    cfg.gen.seed = cfg.seed;
    std::filesystem::create_directories(cfg.out_dir);
    const auto out_path = [&](const std::string& name) {
      return (std::filesystem::path(cfg.out_dir) / name).string();
    };

    if (cmd_verify->parsed()) {
      TheoryOptions opts;
      opts.kl_grid_instances = verify_kl_instances;
      const TheoryReport report = run_theory_suite(opts);
      const json j = to_json(report);
      if (!verify_out.empty()) {
        std::ofstream out(verify_out);
        out << j.dump(2) << "\n";
      }
      for (const auto& c : report.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << " residual=" << c.residual << " tol=" << c.tolerance
                  << "\n";
      }
      std::cout << j.dump(2) << "\n";
      return report.all_pass() ? kExitOk : kExitPropertyFailure;
    }

    const auto load = [&] {
      DatasetDescriptor desc;
      desc.path = cfg.dataset_path;
      desc.format = parse_dataset_format(cfg.dataset_format);
      if (cfg.sample_limit > 0) desc.sample_limit = cfg.sample_limit;
      desc.shuffle_seed = cfg.seed;
      return load_dataset(desc);
    };

    if (cmd_attack->parsed()) {
      auto dataset = load();
      Runtime rt = build_runtime(cfg, /*needs_victim=*/false);
      std::vector<AttackPrompt> prompts;
      prompts.reserve(dataset.size());
      for (size_t i = 0; i < dataset.size(); ++i) {
        std::mt19937_64 rng(mix_seed(cfg.seed, i));
        try {
          prompts.push_back(
              search_adversarial_text(dataset[i].question, cfg.gen, rt.deps(), rng));
        } catch (const ExtractionError& e) {
          AttackPrompt skip;
          skip.clean_text = dataset[i].question;
          skip.position = cfg.gen.position;
          skip.composed_text = dataset[i].question;
          skip.injected_sentence = "";
          prompts.push_back(skip);
          std::cerr << "skip " << dataset[i].id << ": " << e.what() << "\n";
        }
      }
      write_attack_prompts_jsonl(prompts, out_path("attacks.jsonl"));
      std::cout << "wrote " << prompts.size() << " prompts to "
                << out_path("attacks.jsonl") << "\n";
      return kExitOk;
    }

    if (cmd_evaluate->parsed()) {
      auto dataset = load();
      Runtime rt = build_runtime(cfg, /*needs_victim=*/true);
      CampaignConfig ccfg{cfg.gen, cfg.workers, cfg.seed};
      std::ofstream records_out(out_path("records.jsonl"));
      const auto sink = [&](const AttackRecord& r) {
        records_out << to_json(r).dump() << "\n";
        records_out.flush();  // partial output survives interrupts
      };
      const auto records =
          run_campaign(dataset, rt.deps(), *rt.victim, ccfg, sink);
      const MetricsReport metrics = compute_metrics(records);
      write_metrics_json(metrics, cfg.resolved(), out_path("metrics.json"));
      std::cout << to_json(metrics).dump(2) << "\n";
      return kExitOk;
    }

    if (cmd_sweep->parsed()) {
      auto dataset = load();
      Runtime rt = build_runtime(cfg, /*needs_victim=*/true);
      CampaignConfig ccfg{cfg.gen, cfg.workers, cfg.seed};
      const auto grid = parameter_sweep(
          dataset, rt.deps(), *rt.victim,
          parse_grid(sweep_eps.empty() ? std::vector<double>{cfg.gen.epsilon}
                                       : sweep_eps,
                     "--eps-values"),
          parse_grid(sweep_gamma.empty() ? std::vector<double>{cfg.gen.gamma}
                                         : sweep_gamma,
                     "--gamma-values"),
          ccfg);
      write_sweep_csv(grid, out_path("sweep.csv"));
      write_sweep_json(grid, cfg.resolved(), out_path("sweep.json"));
      std::cout << "wrote " << grid.size() << " cells to " << out_path("sweep.csv")
                << "\n";
      return kExitOk;
    }

    if (cmd_transfer->parsed()) {
      auto dataset = load();
      Runtime rt = build_runtime(cfg, /*needs_victim=*/false);
      rt.victim_embedder = std::make_unique<MeanPooledEmbedder>(&rt.vectors);
      std::map<std::string, std::vector<AttackPrompt>> attack_sets;
      for (const auto& spec : attack_sets_arg) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
          throw std::runtime_error("--attack-set wants name=path: " + spec);
        }
        attack_sets[spec.substr(0, eq)] =
            read_attack_prompts_jsonl(spec.substr(eq + 1));
      }
      std::vector<std::unique_ptr<VictimClient>> owned;
      std::map<std::string, VictimClient*> victims;
      for (const auto& spec : victim_specs_arg) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
          throw std::runtime_error("--victim-mock wants name=path: " + spec);
        }
        owned.push_back(
            make_mock_victim(spec.substr(eq + 1), rt.victim_embedder.get()));
        victims[spec.substr(0, eq)] = owned.back().get();
      }
      const auto cells = transfer_matrix(attack_sets, victims, dataset);
      write_transfer_json(cells, cfg.resolved(), out_path("transfer.json"));
      std::cout << "wrote " << cells.size() << " cells to "
                << out_path("transfer.json") << "\n";
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
