#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "nclab/rmt/model.hpp"

namespace nclab::cli {

using json = nlohmann::json;

inline constexpr const char* version = "0.3.0";

/// Config problems: exit status 2.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k{"moments", "nu1-check", "strong-conv", "resolvent", "inclusion", "identities"};
  return k;
}

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw SchemaError(what);
}

inline void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  require(obj.is_object(), where + " must be an object");
  for (const auto& [k, v] : obj.items()) require(allowed.count(k) > 0, "unknown key '" + k + "' in " + where);
}

inline bool is_complex_entry(const json& v) {
  return v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number());
}

// number, [re, im], or a square array of rows of those
inline CMatrix parse_matrix(const json& v, const std::string& where) {
  auto entry = [&](const json& e) {
    require(is_complex_entry(e), where + ": matrix entries are numbers or [re, im] pairs");
    return e.is_number() ? Complex(e.get<double>(), 0) : Complex(e[0].get<double>(), e[1].get<double>());
  };
  if (is_complex_entry(v)) return CMatrix::Constant(1, 1, entry(v));
  require(v.is_array() && !v.empty(), where + " must be a number, a pair or a square matrix");
  const auto m = static_cast<Eigen::Index>(v.size());
  CMatrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == m, where + " must be square");
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = entry(row[static_cast<std::size_t>(j)]);
  }
  return out;
}

inline json matrix_json(const CMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

struct Defaults {
  json n;
  std::size_t trials;
  json params;
  json tolerances;
};

inline Defaults defaults_for(const std::string& kind) {
  if (kind == "moments")
    return {{8, 16, 32, 64}, 400, {{"words", {{1, 1, 1, 1}}}, {"control_variates", false}}, {{"sigmas", 3.0}}};
  if (kind == "nu1-check") return {json::array(), 0, {{"max_degree", 6}, {"alphabet", 2}}, json::object()};
  if (kind == "strong-conv")
    return {{16, 32, 64}, 20, {{"polynomial", "tensor"}}, {{"limit_gap", 0.15}}};
  if (kind == "resolvent")
    return {{8, 16, 24, 32}, 4000, {{"z", {0.0, 4.0}}, {"depth", 14}, {"control_variates", true}},
            {{"slope_min", -2.6}, {"slope_max", -1.4}}};
  if (kind == "inclusion")
    return {{48},
            40,
            {{"epsilon", 0.3},
             {"negative_control", true},
             {"eta", 0.01},
             {"threshold", 0.01},
             {"grid_step", 0.005},
             {"quadrature_nodes", 800}},
            {{"clean_fraction", 0.95}}};
  if (kind == "identities") return {json::array(), 0, json::object(), json::object()};
  throw SchemaError("unknown experiment '" + kind + "'");
}

inline void check_param_types(const std::string& kind, const json& p) {
  auto num = [&](const char* k) { require(p.at(k).is_number(), std::string("params.") + k + " must be a number"); };
  auto posint = [&](const char* k) {
    require(p.at(k).is_number_integer() && p.at(k).get<long>() > 0, std::string("params.") + k + " must be a positive integer");
  };
  auto boolean = [&](const char* k) { require(p.at(k).is_boolean(), std::string("params.") + k + " must be true or false"); };
  if (kind == "moments") {
    require(p.at("words").is_array() && !p.at("words").empty(), "params.words must be a non-empty list");
    for (const auto& w : p.at("words")) {
      require(w.is_array() && !w.empty(), "each word is a non-empty list of generator indices");
      for (const auto& i : w) require(i.is_number_integer() && i.get<int>() >= 1, "generator indices are integers >= 1");
    }
    boolean("control_variates");
  } else if (kind == "nu1-check") {
    posint("max_degree");
    posint("alphabet");
  } else if (kind == "strong-conv") {
    require(p.at("polynomial") == "tensor" || p.at("polynomial") == "free-sum",
            "params.polynomial must be \"tensor\" or \"free-sum\"");
  } else if (kind == "resolvent") {
    require(is_complex_entry(p.at("z")) && p.at("z").is_array(), "params.z must be [re, im]");
    require(p.at("depth").is_number_integer() && p.at("depth").get<int>() >= 0, "params.depth must be an integer >= 0");
    boolean("control_variates");
  } else if (kind == "inclusion") {
    for (const char* k : {"epsilon", "eta", "threshold", "grid_step"}) num(k);
    boolean("negative_control");
    posint("quadrature_nodes");
  }
}

}  // namespace detail

/// Fully materialized experiment configuration.
struct ExperimentConfig {
  std::string experiment;
  ModelCoefficients model;
  std::vector<int> n;
  std::size_t trials = 0;
  std::uint64_t base_seed = 1;
  unsigned threads = 1;
  json params;
  json tolerances;
  std::string out_dir = "out";

  /// Canonical JSON (defaults filled in).
  json to_json() const {
    json m{{"xi", detail::matrix_json(model.xi)}, {"gamma", json::array()}, {"beta", json::array()}};
    for (const auto& g : model.gamma) m["gamma"].push_back(detail::matrix_json(g));
    for (const auto& b : model.beta) m["beta"].push_back(detail::matrix_json(b));
    return {{"experiment", experiment}, {"model", m},           {"N", n},
            {"trials", trials},         {"base_seed", base_seed}, {"threads", threads},
            {"params", params},         {"tolerances", tolerances}, {"output", {{"dir", out_dir}}}};
  }

  /// FNV-1a over the canonical JSON without threads and output location, which do
  /// not change any number.
  std::string hash() const {
    json j = to_json();
    j.erase("threads");
    j.erase("output");
    const std::string s = j.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

/// Validates a config document and fills in every default. `kind` (from the
/// subcommand) wins when the document has no "experiment"; a mismatch is an error.
inline ExperimentConfig materialize(const json& doc, const std::string& kind = "") {
  using detail::require;
  detail::only_keys(doc, {"$schema", "description", "experiment", "model", "N", "trials", "base_seed", "threads",
                          "tolerances", "params", "output"},
                    "config");
  ExperimentConfig c;
  if (doc.contains("experiment")) {
    require(doc["experiment"].is_string(), "experiment must be a string");
    c.experiment = doc["experiment"].get<std::string>();
    require(kind.empty() || kind == c.experiment,
            "config is for '" + c.experiment + "' but the subcommand is '" + kind + "'");
  } else {
    require(!kind.empty(), "config has no experiment and none was given on the command line");
    c.experiment = kind;
  }
  const auto& kinds = experiment_kinds();
  require(std::find(kinds.begin(), kinds.end(), c.experiment) != kinds.end(), "unknown experiment '" + c.experiment + "'");
  const auto def = detail::defaults_for(c.experiment);

  const json model = doc.value("model", json{{"xi", 0.0}, {"gamma", {0.5}}, {"beta", {0.5}}});
  detail::only_keys(model, {"xi", "gamma", "beta"}, "model");
  c.model.xi = detail::parse_matrix(model.value("xi", json(0.0)), "model.xi");
  for (const char* leg : {"gamma", "beta"}) {
    const json list = model.value(leg, json::array());
    require(list.is_array(), std::string("model.") + leg + " must be a list");
    for (const auto& e : list)
      (leg[0] == 'g' ? c.model.gamma : c.model.beta).push_back(detail::parse_matrix(e, std::string("model.") + leg));
  }
  try {
    c.model.validate();
  } catch (const Error& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }

  const json n = doc.value("N", def.n);
  require(n.is_array(), "N must be a list");
  for (const auto& v : n) {
    require(v.is_number_integer() && v.get<int>() >= 1, "N entries are integers >= 1");
    c.n.push_back(v.get<int>());
  }
  const json trials = doc.value("trials", json(def.trials));
  require(trials.is_number_integer() && trials.get<std::int64_t>() >= 0, "trials must be a non-negative integer");
  c.trials = trials.get<std::size_t>();
  const json seed = doc.value("base_seed", json(std::uint64_t{1}));
  require(seed.is_number_integer() && seed.get<std::int64_t>() >= 0, "base_seed must be a non-negative integer");
  c.base_seed = seed.get<std::uint64_t>();
  const json threads = doc.value("threads", json(1u));
  require(threads.is_number_integer() && threads.get<std::int64_t>() >= 0, "threads must be a non-negative integer");
  c.threads = threads.get<unsigned>();

  c.params = def.params;
  if (doc.contains("params")) {
    std::set<std::string> allowed;
    for (const auto& [k, v] : def.params.items()) allowed.insert(k);
    detail::only_keys(doc["params"], allowed, "params");
    for (const auto& [k, v] : doc["params"].items()) c.params[k] = v;
  }
  detail::check_param_types(c.experiment, c.params);

  c.tolerances = def.tolerances;
  if (doc.contains("tolerances")) {
    std::set<std::string> allowed;
    for (const auto& [k, v] : def.tolerances.items()) allowed.insert(k);
    detail::only_keys(doc["tolerances"], allowed, "tolerances");
    for (const auto& [k, v] : doc["tolerances"].items()) {
      require(v.is_number(), "tolerances." + k + " must be a number");
      c.tolerances[k] = v;
    }
  }

  if (doc.contains("output")) {
    detail::only_keys(doc["output"], {"dir"}, "output");
    require(doc["output"].value("dir", json("out")).is_string(), "output.dir must be a string");
    c.out_dir = doc["output"].value("dir", std::string("out"));
  }

  const bool sampled = c.experiment != "nu1-check" && c.experiment != "identities";
  require(!sampled || !c.n.empty(), "N must not be empty for " + c.experiment);
  require(!sampled || c.trials >= 2, "trials must be >= 2 for " + c.experiment);
  return c;
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace nclab::cli
