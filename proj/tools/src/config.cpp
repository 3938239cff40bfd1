#include <fstream>

#include "usng/errors.hpp"
#include "usng/model_spec.hpp"
#include "usng_cli/cli.hpp"

namespace usng::cli {
namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  return {
      {"command", c.command},
      {"model", model_to_json(c.model)},
      {"n", c.n},
      {"n_grid", c.n_grid},
      {"pairs", c.pairs},
      {"replicas", c.replicas},
      {"seed", c.seed},
      {"stream", c.stream},
      {"threads", c.threads},
      {"family", c.family},
      {"gamma", c.gamma},
      {"kappa", c.kappa},
      {"epsilon", c.epsilon},
      {"thresholds", c.thresholds},
      {"max_sources", c.max_sources},
      {"middle_pairs", c.middle_pairs},
      {"cutoff", c.cutoff},
      {"k_top", c.k_top},
      {"input", c.input},
      {"out", c.out},
      {"trace", c.trace},
      {"timestamp", c.timestamp},
  };
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  ExperimentConfig c;
  read(j, "command", c.command);
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  read(j, "n", c.n);
  read(j, "n_grid", c.n_grid);
  read(j, "pairs", c.pairs);
  read(j, "replicas", c.replicas);
  read(j, "seed", c.seed);
  read(j, "stream", c.stream);
  read(j, "threads", c.threads);
  read(j, "family", c.family);
  read(j, "gamma", c.gamma);
  read(j, "kappa", c.kappa);
  read(j, "epsilon", c.epsilon);
  read(j, "thresholds", c.thresholds);
  read(j, "max_sources", c.max_sources);
  read(j, "middle_pairs", c.middle_pairs);
  read(j, "cutoff", c.cutoff);
  read(j, "k_top", c.k_top);
  read(j, "input", c.input);
  read(j, "out", c.out);
  read(j, "trace", c.trace);
  read(j, "timestamp", c.timestamp);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParameterError("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_path_for(const std::string& out) { return out + ".config.json"; }

}  // namespace usng::cli
