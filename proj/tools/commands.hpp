#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace mlt::cli {

void cmd_train(const ExperimentConfig& cfg);
void cmd_infer(const ExperimentConfig& cfg, const std::string& model_path,
               const std::string& input_path);
void cmd_eval(const ExperimentConfig& cfg,
              const std::vector<std::string>& model_paths);
void cmd_classify(const ExperimentConfig& cfg, const std::string& model_path);
void cmd_align(const ExperimentConfig& cfg, const std::string& model_a,
               const std::string& model_b, bool with_doc_frequency);
void cmd_strength(const ExperimentConfig& cfg, const std::string& state_path);
// Returns false when any cell failed (sweep still completes).
bool cmd_sweep(const ExperimentConfig& cfg);

}  // namespace mlt::cli
