#include <algorithm>
#include <map>
#include <set>

#include "internal.hpp"
#include "specanom/rational.hpp"

namespace specanom::cli {
namespace detail {
namespace {

Spectrum resolve_named(const TaskConfig& config, const std::string& name, std::vector<std::string>& stack) {
  if (!config.models.contains(name)) throw ConfigError("unknown model '" + name + "'");
  if (std::find(stack.begin(), stack.end(), name) != stack.end()) {
    throw ConfigError("model '" + name + "' refers to itself");
  }
  stack.push_back(name);
  Spectrum s = spectrum_from_json(config.models.at(name),
                                  [&](const std::string& ref) { return resolve_named(config, ref, stack); });
  stack.pop_back();
  return s;
}

}  // namespace

Spectrum resolve_model(const TaskConfig& config, const nlohmann::json& ref) {
  std::vector<std::string> stack;
  if (ref.is_string()) return resolve_named(config, ref.get<std::string>(), stack);
  if (ref.is_object()) {
    return spectrum_from_json(ref, [&](const std::string& name) { return resolve_named(config, name, stack); });
  }
  throw ConfigError("model reference must be a name or a descriptor");
}

Multiplier multiplier_from_json(const TaskConfig& config, const nlohmann::json& j, const Spectrum& fallback) {
  if (!j.is_object()) throw ConfigError("multiplier must be an object");
  reject_unknown(j, {"kind", "of", "r"}, "multiplier");
  const Spectrum of = j.contains("of") ? resolve_model(config, j.at("of")) : fallback;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return Multiplier::identity_on(of);
  if (kind == "power") return Multiplier::power_of(of, number_from_json(j.at("r")));
  if (kind == "log") return Multiplier::log_of(of);
  if (kind == "sign") return Multiplier::sign_of(of);
  throw ConfigError("unknown multiplier kind '" + kind + "' (key 'kind')");
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  throw ConfigError("malformed number: " + j.dump());
}

void reject_unknown(const nlohmann::json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace detail

namespace {

struct ParamSchema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> models;    // keys holding model references
  std::vector<std::string> families;  // keys holding family descriptors
  std::vector<std::string> symbols;   // keys holding symbol descriptors
};

const std::map<std::string, ParamSchema>& schemas() {
  static const std::map<std::string, ParamSchema> s{
      {"invariants", {{"model"}, {"expect"}, {"model"}, {}, {}}},
      {"anomaly.mult", {{"a", "b"}, {}, {"a", "b"}, {}, {}}},
      {"anomaly.pfaffian", {{"model"}, {}, {"model"}, {}, {}}},
      {"anomaly.okikiolu", {{"a", "q1", "q2"}, {}, {"a", "q1", "q2"}, {}, {}}},
      {"anomaly.jacobian", {{"q", "c"}, {}, {"q", "c"}, {}, {}}},
      {"flow", {{"family"}, {"expect_sf", "shift"}, {}, {"family"}, {}}},
      {"eta_variation", {{"family"}, {}, {}, {"family"}, {}}},
      {"phase_difference", {{"family"}, {"expect"}, {}, {"family"}, {}}},
      {"radul", {{"a", "b", "weight"}, {"expect"}, {"weight"}, {}, {"a", "b"}}},
      {"gamma_check", {{"a", "q"}, {}, {"q"}, {}, {}}},
  };
  return s;
}

const std::vector<std::string> kExpectKeys{"eta", "zeta_abs_at_zero", "det_modulus", "phase", "abs_phase"};

void validate_task(const TaskConfig& config, const TaskSpec& t) {
  const auto& schema = schemas().at(t.kind);
  std::vector<std::string> allowed = schema.required;
  allowed.insert(allowed.end(), schema.optional.begin(), schema.optional.end());
  const std::string where = "task '" + t.id + "'";
  detail::reject_unknown(t.params, allowed, where + " params");
  for (const auto& key : schema.required) {
    if (!t.params.contains(key)) throw ConfigError(where + ": missing required parameter '" + key + "'");
  }
  try {
    for (const auto& key : schema.models) (void)detail::resolve_model(config, t.params.at(key));
    for (const auto& key : schema.families) (void)family_from_json(t.params.at(key));
    for (const auto& key : schema.symbols) (void)symbol_from_json(t.params.at(key));
    if (t.kind == "gamma_check") {
      (void)detail::multiplier_from_json(config, t.params.at("a"), detail::resolve_model(config, t.params.at("q")));
    }
    if (t.params.contains("expect")) {
      const auto& e = t.params.at("expect");
      if (t.kind == "invariants") {
        if (!e.is_object()) throw ConfigError("'expect' must be an object");
        detail::reject_unknown(e, kExpectKeys, where + " expect");
        for (const auto& [k, v] : e.items()) (void)detail::number_from_json(v);
      } else {
        (void)detail::number_from_json(e);
      }
    }
    if (t.params.contains("expect_sf") && !t.params.at("expect_sf").is_number_integer()) {
      throw ConfigError("'expect_sf' must be an integer");
    }
    if (t.params.contains("shift")) (void)detail::number_from_json(t.params.at("shift"));
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : schemas()) k.push_back(name);
    return k;
  }();
  return kinds;
}

TaskConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(doc, {"models", "tasks", "output"}, "config");
  if (!doc.contains("tasks") || !doc.at("tasks").is_array()) throw ConfigError("config: 'tasks' array is required");
  TaskConfig c;
  if (doc.contains("models")) {
    if (!doc.at("models").is_object()) throw ConfigError("config: 'models' must be an object");
    c.models = doc.at("models");
    for (const auto& [name, _] : c.models.items()) {
      try {
        (void)detail::resolve_model(c, name);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError("model '" + name + "': " + e.what());
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("model '" + name + "': " + e.what());
      }
    }
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    if (!o.is_object()) throw ConfigError("config: 'output' must be an object");
    detail::reject_unknown(o, {"format", "path"}, "output");
    if (o.contains("format")) c.format = o.at("format").get<std::string>();
    if (o.contains("path")) c.output_path = o.at("path").get<std::string>();
    if (c.format != "json" && c.format != "csv") throw ConfigError("output: format must be json or csv");
  }
  std::set<std::string> ids;
  std::size_t index = 0;
  for (const auto& t : doc.at("tasks")) {
    if (!t.is_object()) throw ConfigError("config: every task must be an object");
    detail::reject_unknown(t, {"kind", "id", "params", "tolerance"}, "task " + std::to_string(index));
    if (!t.contains("kind") || !t.at("kind").is_string()) {
      throw ConfigError("task " + std::to_string(index) + ": missing required field 'kind'");
    }
    TaskSpec spec;
    spec.kind = t.at("kind").get<std::string>();
    if (!schemas().contains(spec.kind)) {
      throw ConfigError("task " + std::to_string(index) + ": unknown task kind '" + spec.kind + "' (key 'kind')");
    }
    spec.id = t.contains("id") ? t.at("id").get<std::string>() : spec.kind + "#" + std::to_string(index);
    if (!ids.insert(spec.id).second) throw ConfigError("duplicate task id '" + spec.id + "'");
    if (t.contains("params")) {
      if (!t.at("params").is_object()) throw ConfigError("task '" + spec.id + "': 'params' must be an object");
      spec.params = t.at("params");
    }
    if (t.contains("tolerance")) {
      const auto& tol = t.at("tolerance");
      if (!tol.is_number() || !(tol.get<double>() > 0.0)) {
        throw ConfigError("task '" + spec.id + "': tolerance must be a positive number");
      }
      spec.tolerance = tol.get<double>();
    }
    validate_task(c, spec);
    c.tasks.push_back(std::move(spec));
    ++index;
  }
  return c;
}

TaskConfig parse_config_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json model_catalog() {
  return nlohmann::json::array({
      {{"kind", "circle_dirac"}, {"params", {"a"}}, {"spectrum", "n + a, n in Z"}},
      {{"kind", "circle_modulus"}, {"params", {"scale?"}}, {"spectrum", "scale*|n|, n != 0"}},
      {{"kind", "asymmetric_modulus"}, {"params", {"plus", "minus"}}, {"spectrum", "plus*n, minus*n for n >= 1"}},
      {{"kind", "torus"}, {"params", {"d", "m2"}}, {"spectrum", "|k|^2 + m2, k in Z^d"}},
      {{"kind", "generic"}, {"params", {"c", "p", "corrections?"}}, {"spectrum", "c*k^p*(1 + sum c_j k^-j)"}},
      {{"kind", "finite"}, {"params", {"values", "order", "self_adjoint?"}}, {"spectrum", "listed values"}},
      {{"kind", "transform"},
       {"params", {"base", "op", "value?"}},
       {"spectrum", "op in abs, square, scale, shift, power, invert"}},
      {{"kind", "skew_double"}, {"params", {"base"}}, {"spectrum", "+-i*lambda"}},
      {{"kind", "product"}, {"params", {"left", "right"}}, {"spectrum", "eigenvalue-wise product"}},
  });
}

}  // namespace specanom::cli
