#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlt/sampler.hpp"

namespace mlt::cli {

// Resolved experiment configuration: defaults, then config file keys, then
// command-line flags (flags win).
struct ExperimentConfig {
  std::string model = "lda";
  std::string side1, side2;
  std::string lang1, lang2;  // inferred from the corpus when empty
  std::string stoplist1, stoplist2;
  std::string lexicon;
  std::string reference;
  std::string test_side1, test_side2;
  std::vector<std::string> labels = {"technology", "culture", "science"};

  int topics = 20;
  double alpha = 0.1;
  double beta = 0.01;
  double chi = 2.0;
  double focus_threshold = 0.8;
  double beta_prime = 0.01;
  double beta_dprime = 100.0;
  int train_sweeps = 1000;
  int infer_sweeps = 200;
  int chains = 5;
  int freq_cutoff = 100;
  double link_proportion = 1.0;
  double lexicon_proportion = 1.0;
  std::string lexicon_mode = "random";
  std::uint64_t seed = 0;
  std::string out = "out";
  int jobs = 1;
  bool progress = false;

  int top_words = 10;
  double validity_fraction = 0.8;
  int folds = 5;
  std::vector<double> reg_grid = {0.01, 0.1, 1.0, 10.0};

  std::string sweep_axis = "link-proportion";
  std::vector<double> sweep_values = {0, 0.01, 0.05, 0.1, 0.2, 0.4, 0.8, 1};
  std::vector<std::string> sweep_models;  // defaults to {model}

  void apply(const std::string& key, const std::string& value);
  void validate() const;
  nlohmann::json to_json() const;
};

// Flat `key = value` file; `#` starts a comment line.
std::map<std::string, std::string> parse_config_file(const std::string& path);

ExperimentConfig resolve_config(const std::string& config_path,
                                const std::vector<std::pair<std::string, std::string>>& flags);

}  // namespace mlt::cli
