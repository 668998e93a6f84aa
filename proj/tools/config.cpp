#include "config.hpp"

#include <fstream>

#include "mlt/common.hpp"

namespace mlt::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InputError("invalid value for config field " + key + ": \"" + v + "\"");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw InputError("invalid value for config field " + key + ": \"" + v + "\"");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    std::uint64_t i = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw InputError("invalid value for config field " + key + ": \"" + v + "\"");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("invalid value for config field " + key + ": \"" + v + "\"");
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_double(key, item));
  return out;
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  if (key == "model") model = value;
  else if (key == "side1") side1 = value;
  else if (key == "side2") side2 = value;
  else if (key == "lang1") lang1 = value;
  else if (key == "lang2") lang2 = value;
  else if (key == "stoplist1") stoplist1 = value;
  else if (key == "stoplist2") stoplist2 = value;
  else if (key == "lexicon") lexicon = value;
  else if (key == "reference") reference = value;
  else if (key == "test-side1") test_side1 = value;
  else if (key == "test-side2") test_side2 = value;
  else if (key == "labels") labels = split_list(value);
  else if (key == "topics") topics = parse_int(key, value);
  else if (key == "alpha") alpha = parse_double(key, value);
  else if (key == "beta") beta = parse_double(key, value);
  else if (key == "chi") chi = parse_double(key, value);
  else if (key == "focus-threshold") focus_threshold = parse_double(key, value);
  else if (key == "beta-prime") beta_prime = parse_double(key, value);
  else if (key == "beta-dprime") beta_dprime = parse_double(key, value);
  else if (key == "train-sweeps") train_sweeps = parse_int(key, value);
  else if (key == "infer-sweeps") infer_sweeps = parse_int(key, value);
  else if (key == "chains") chains = parse_int(key, value);
  else if (key == "freq-cutoff") freq_cutoff = parse_int(key, value);
  else if (key == "link-proportion") link_proportion = parse_double(key, value);
  else if (key == "lexicon-proportion") lexicon_proportion = parse_double(key, value);
  else if (key == "lexicon-mode") lexicon_mode = value;
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "out") out = value;
  else if (key == "jobs") jobs = parse_int(key, value);
  else if (key == "progress") progress = parse_bool(key, value);
  else if (key == "top-words") top_words = parse_int(key, value);
  else if (key == "validity-fraction") validity_fraction = parse_double(key, value);
  else if (key == "folds") folds = parse_int(key, value);
  else if (key == "reg-grid") reg_grid = parse_double_list(key, value);
  else if (key == "sweep-axis") sweep_axis = value;
  else if (key == "sweep-values") sweep_values = parse_double_list(key, value);
  else if (key == "sweep-models") sweep_models = split_list(value);
  else throw InputError("invalid config field: " + key);
}

void ExperimentConfig::validate() const {
  model_kind_from_string(model);
  if (topics < 2) throw InputError("invalid config field topics: must be >= 2");
  if (alpha <= 0 || beta <= 0 || chi <= 0 || beta_prime <= 0 || beta_dprime <= 0)
    throw InputError("invalid config field: hyperparameters must be positive");
  if (focus_threshold < 0 || focus_threshold > 1)
    throw InputError("invalid config field focus-threshold: must be in [0,1]");
  if (link_proportion < 0 || link_proportion > 1)
    throw InputError("invalid config field link-proportion: must be in [0,1]");
  if (lexicon_proportion < 0 || lexicon_proportion > 1)
    throw InputError("invalid config field lexicon-proportion: must be in [0,1]");
  if (lexicon_mode != "random" && lexicon_mode != "frequency")
    throw InputError("invalid config field lexicon-mode: want random|frequency");
  if (train_sweeps < 0 || infer_sweeps < 0)
    throw InputError("invalid config field: sweep counts must be >= 0");
  if (chains < 1) throw InputError("invalid config field chains: must be >= 1");
  if (jobs < 1) throw InputError("invalid config field jobs: must be >= 1");
  if (top_words < 1) throw InputError("invalid config field top-words: must be >= 1");
  if (folds < 2) throw InputError("invalid config field folds: must be >= 2");
  if (sweep_axis != "link-proportion" && sweep_axis != "lexicon-proportion")
    throw InputError(
        "invalid config field sweep-axis: want link-proportion|lexicon-proportion");
  for (double v : sweep_values)
    if (v < 0 || v > 1)
      throw InputError("invalid config field sweep-values: values must be in [0,1]");
  for (std::size_t i = 1; i < sweep_values.size(); i++)
    if (sweep_values[i - 1] > sweep_values[i])
      throw InputError("invalid config field sweep-values: must be ascending");
  for (const auto& m : sweep_models) model_kind_from_string(m);
}

json ExperimentConfig::to_json() const {
  return json{{"model", model},
              {"side1", side1},
              {"side2", side2},
              {"lang1", lang1},
              {"lang2", lang2},
              {"stoplist1", stoplist1},
              {"stoplist2", stoplist2},
              {"lexicon", lexicon},
              {"reference", reference},
              {"test_side1", test_side1},
              {"test_side2", test_side2},
              {"labels", labels},
              {"topics", topics},
              {"alpha", alpha},
              {"beta", beta},
              {"chi", chi},
              {"focus_threshold", focus_threshold},
              {"beta_prime", beta_prime},
              {"beta_dprime", beta_dprime},
              {"train_sweeps", train_sweeps},
              {"infer_sweeps", infer_sweeps},
              {"chains", chains},
              {"freq_cutoff", freq_cutoff},
              {"link_proportion", link_proportion},
              {"lexicon_proportion", lexicon_proportion},
              {"lexicon_mode", lexicon_mode},
              {"seed", seed},
              {"out", out},
              {"jobs", jobs},
              {"top_words", top_words},
              {"validity_fraction", validity_fraction},
              {"folds", folds},
              {"reg_grid", reg_grid},
              {"sweep_axis", sweep_axis},
              {"sweep_values", sweep_values},
              {"sweep_models", sweep_models}};
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw InputError(path + ":" + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

ExperimentConfig resolve_config(
    const std::string& config_path,
    const std::vector<std::pair<std::string, std::string>>& flags) {
  ExperimentConfig cfg;
  if (!config_path.empty())
    for (const auto& [k, v] : parse_config_file(config_path)) cfg.apply(k, v);
  for (const auto& [k, v] : flags) cfg.apply(k, v);
  cfg.validate();
  return cfg;
}

}  // namespace mlt::cli
