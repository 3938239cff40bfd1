#include "usng/model_spec.hpp"

#include <string>

#include "usng/errors.hpp"

namespace usng {
namespace {

using nlohmann::json;

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParameterError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

}  // namespace

json rule_to_json(const AttachmentRule& rule) {
  if (rule.is_affine()) {
    return {{"type", "affine"}, {"slope", rule.slope()}, {"intercept", rule.intercept()}};
  }
  return {{"type", "table"}, {"values", rule.values()}, {"tail_slope", rule.slope()}};
}

AttachmentRule rule_from_json(const json& j) {
  const auto type = field<std::string>(j, "type");
  if (type == "affine") {
    return AttachmentRule::affine(field<double>(j, "slope"), field<double>(j, "intercept"));
  }
  if (type == "table") {
    return AttachmentRule::table(field<std::vector<double>>(j, "values"),
                                 field<double>(j, "tail_slope"));
  }
  throw ParameterError("unknown attachment rule type '" + type + "'");
}

json model_to_json(const ModelSpec& spec) {
  json j;
  j["model"] = std::string(model_name(spec));
  if (const auto* s = std::get_if<PaFixed>(&spec)) {
    j["m"] = s->m;
    j["delta"] = s->delta;
  } else if (const auto* s = std::get_if<PaVariable>(&spec)) {
    j["rule"] = rule_to_json(s->rule);
  } else if (const auto* s = std::get_if<ChungLu>(&spec)) {
    j["gamma"] = s->weights.gamma;
    j["scale"] = s->weights.scale;
    j["lower_c"] = s->weights.lower_c;
    j["upper_C"] = s->weights.upper_C;
  } else if (const auto* s = std::get_if<NorrosReittu>(&spec)) {
    j["tau"] = s->tau;
    j["tail_const"] = s->tail_const;
  } else if (const auto* s = std::get_if<ConfigModel>(&spec)) {
    j["tau"] = s->tau;
    j["tail_const"] = s->tail_const;
  }
  return j;
}

ModelSpec model_from_json(const json& j) {
  const auto name = field<std::string>(j, "model");
  if (name == "pa_fixed") {
    return PaFixed{field<std::uint32_t>(j, "m"), field<double>(j, "delta")};
  }
  if (name == "pa_variable") {
    if (!j.contains("rule")) throw ParameterError("missing field 'rule'");
    return PaVariable{rule_from_json(j.at("rule"))};
  }
  if (name == "chung_lu") {
    WeightScheme w;
    w.gamma = field<double>(j, "gamma");
    w.scale = field_or<double>(j, "scale", 1.0);
    w.lower_c = field_or<double>(j, "lower_c", w.scale);
    w.upper_C = field_or<double>(j, "upper_C", w.scale);
    return ChungLu{w};
  }
  if (name == "norros_reittu") {
    return NorrosReittu{field<double>(j, "tau"), field_or<double>(j, "tail_const", 1.0)};
  }
  if (name == "config_model") {
    return ConfigModel{field<double>(j, "tau"), field_or<double>(j, "tail_const", 1.0)};
  }
  throw ParameterError("unknown model '" + name + "'");
}

void to_json(json& j, const SeededModel& m) {
  j = model_to_json(m.spec);
  j["seed"] = m.seed.seed;
  j["stream"] = m.seed.stream;
}

void from_json(const json& j, SeededModel& m) {
  m.spec = model_from_json(j);
  m.seed.seed = field_or<std::uint64_t>(j, "seed", 0);
  m.seed.stream = field_or<std::uint64_t>(j, "stream", 0);
}

}  // namespace usng
