#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mlt/common.hpp"

namespace {

using mlt::cli::ExperimentConfig;

struct FlagCollector {
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string config_path;

  void add_option(CLI::App* cmd, const std::string& key) {
    cmd->add_option_function<std::string>(
            "--" + key,
            [this, key](const std::string& v) { overrides.emplace_back(key, v); },
            "config key " + key)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  // model_key=false for commands whose --model means a model file
  void add_common(CLI::App* cmd, bool model_key = true) {
    cmd->add_option("--config", config_path, "config file (key = value lines)");
    if (model_key) add_option(cmd, "model");
    for (const char* key :
         {"seed", "jobs", "out", "side1", "side2", "lang1", "lang2",
          "stoplist1", "stoplist2", "lexicon", "reference", "test-side1",
          "test-side2", "labels", "topics", "alpha", "beta", "chi",
          "focus-threshold", "beta-prime", "beta-dprime", "train-sweeps",
          "infer-sweeps", "chains", "freq-cutoff", "link-proportion",
          "lexicon-proportion", "lexicon-mode", "top-words",
          "validity-fraction", "folds", "reg-grid", "sweep-axis",
          "sweep-values", "sweep-models"})
      add_option(cmd, key);
    cmd->add_flag_callback(
        "--progress",
        [this]() { overrides.emplace_back("progress", "true"); },
        "per-sweep diagnostics on stderr");
  }

  ExperimentConfig resolve() const {
    return mlt::cli::resolve_config(config_path, overrides);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilingual topic modeling toolkit"};
  app.require_subcommand(1);

  FlagCollector train_flags, infer_flags, eval_flags, classify_flags,
      align_flags, strength_flags, sweep_flags;

  auto* train_cmd = app.add_subcommand("train", "train Gibbs chains");
  train_flags.add_common(train_cmd);

  auto* infer_cmd =
      app.add_subcommand("infer", "held-out document-topic inference");
  infer_flags.add_common(infer_cmd, /*model_key=*/false);
  std::string infer_model, infer_input;
  infer_cmd->add_option("--model", infer_model, "trained model file");
  infer_cmd->add_option("--input", infer_input, "held-out JSONL corpus");

  auto* eval_cmd = app.add_subcommand("eval", "CNPMI topic coherence");
  eval_flags.add_common(eval_cmd, /*model_key=*/false);
  std::vector<std::string> eval_models;
  eval_cmd->add_option("--model", eval_models, "model file(s), one per chain");

  auto* classify_cmd =
      app.add_subcommand("classify", "crosslingual document classification");
  classify_flags.add_common(classify_cmd, /*model_key=*/false);
  std::string classify_model;
  classify_cmd->add_option("--model", classify_model, "trained model file");

  auto* align_cmd = app.add_subcommand("align", "align topics of two models");
  align_flags.add_common(align_cmd, /*model_key=*/false);
  std::string align_a, align_b;
  bool align_docfreq = false;
  align_cmd->add_option("--model-a", align_a, "first model file");
  align_cmd->add_option("--model-b", align_b, "second model file");
  align_cmd->add_flag("--doc-frequency", align_docfreq,
                      "add the document-frequency report (needs the training "
                      "corpus config)");

  auto* strength_cmd =
      app.add_subcommand("strength", "per-token transfer-strength ratios");
  strength_flags.add_common(strength_cmd);
  std::string strength_state;
  strength_cmd->add_option("--state", strength_state, "state checkpoint file");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "proportion sweep over train+eval+classify");
  sweep_flags.add_common(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_cmd->parsed()) {
      mlt::cli::cmd_train(train_flags.resolve());
    } else if (infer_cmd->parsed()) {
      mlt::cli::cmd_infer(infer_flags.resolve(), infer_model, infer_input);
    } else if (eval_cmd->parsed()) {
      mlt::cli::cmd_eval(eval_flags.resolve(), eval_models);
    } else if (classify_cmd->parsed()) {
      mlt::cli::cmd_classify(classify_flags.resolve(), classify_model);
    } else if (align_cmd->parsed()) {
      mlt::cli::cmd_align(align_flags.resolve(), align_a, align_b,
                          align_docfreq);
    } else if (strength_cmd->parsed()) {
      mlt::cli::cmd_strength(strength_flags.resolve(), strength_state);
    } else if (sweep_cmd->parsed()) {
      if (!mlt::cli::cmd_sweep(sweep_flags.resolve())) {
        std::fprintf(stderr, "sweep: one or more cells failed\n");
        return 1;
      }
    }
  } catch (const mlt::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
