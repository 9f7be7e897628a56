#include "gsa/config.hpp"

#include <json.hpp>

#include "gsa/error.hpp"
#include "gsa/io.hpp"

namespace gsa {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::config, msg); }

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where + ": missing parameter '" + key + "'");
  if (!obj[key].is_number()) fail(where + ": parameter '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_array()) fail(where + ": parameter '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) fail(where + ": parameter '" + key + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Distribution parse_dist(const std::string& family, const json& p, const std::string& where) {
  if (!p.is_object()) fail(where + ": 'params' must be an object");
  if (family == "uniform") return Uniform{number(p, "lower", where), number(p, "upper", where)};
  if (family == "loguniform") return LogUniform{number(p, "lower", where), number(p, "upper", where)};
  if (family == "normal") return Normal{number(p, "mean", where), number(p, "sd", where)};
  if (family == "truncnormal") {
    return TruncNormal{number(p, "mean", where), number(p, "sd", where), number(p, "lower", where),
                       number(p, "upper", where)};
  }
  if (family == "lognormal") return LogNormal{number(p, "mu", where), number(p, "sigma", where)};
  if (family == "triangular") {
    return Triangular{number(p, "lower", where), number(p, "mode", where), number(p, "upper", where)};
  }
  if (family == "beta") {
    return Beta{number(p, "alpha", where), number(p, "beta", where), number(p, "lower", where),
                number(p, "upper", where)};
  }
  if (family == "discrete") return DiscreteWeighted::make(numbers(p, "values", where), numbers(p, "weights", where));
  fail(where + ": unknown distribution '" + family +
       "' (expected uniform, loguniform, normal, truncnormal, lognormal, triangular, beta, discrete)");
}

ModelDef parse_model(const json& m, const std::vector<std::string>& names, const json& outputs) {
  if (!m.is_object()) fail("'model' must be an object");
  std::vector<std::string> out_names;
  if (!outputs.is_null()) {
    if (!outputs.is_array()) fail("'outputs' must be an array of names");
    for (const auto& o : outputs) {
      if (!o.is_string()) fail("'outputs' must be an array of names");
      out_names.push_back(o.get<std::string>());
    }
  }
  const int kinds = m.contains("builtin") + m.contains("formula") + m.contains("external");
  if (kinds != 1) fail("'model' must contain exactly one of 'builtin', 'formula', 'external'");

  if (m.contains("builtin")) {
    const auto kind = m["builtin"].get<std::string>();
    if (kind == "linear") return LinearModel{numbers(m, "coefficients", "model")};
    if (kind == "ishigami") {
      IshigamiModel im;
      if (m.contains("a")) im.a = number(m, "a", "model");
      if (m.contains("b")) im.b = number(m, "b", "model");
      return im;
    }
    if (kind == "sobol_g") return SobolGModel{numbers(m, "a", "model")};
    fail("model: unknown builtin '" + kind + "' (expected linear, ishigami, sobol_g)");
  }

  if (m.contains("formula")) {
    std::vector<std::pair<std::string, std::string>> formulas;
    const auto& f = m["formula"];
    if (f.is_string()) {
      formulas.emplace_back(out_names.empty() ? "y" : out_names.front(), f.get<std::string>());
    } else if (f.is_object()) {
      for (const auto& [name, src] : f.items()) {
        if (!src.is_string()) fail("model: formula for '" + name + "' must be a string");
        formulas.emplace_back(name, src.get<std::string>());
      }
    } else {
      fail("model: 'formula' must be a string or an object of named formulas");
    }
    try {
      return make_formula_model(formulas, names);
    } catch (const ParseError& e) {
      fail(std::string("model: ") + e.what());
    }
  }

  const auto& e = m["external"];
  ExternalModel ext;
  ext.outputs = out_names;
  if (e.is_string()) {
    ext.command = e.get<std::string>();
  } else if (e.is_object()) {
    if (!e.contains("command") || !e["command"].is_string()) fail("model: external.command must be a string");
    ext.command = e["command"].get<std::string>();
    if (e.contains("mode")) {
      const auto mode = e["mode"].get<std::string>();
      if (mode == "batch") {
        ext.mode = ExternalMode::batch;
      } else if (mode == "per-row") {
        ext.mode = ExternalMode::per_row;
      } else {
        fail("model: external.mode must be 'batch' or 'per-row'");
      }
    }
    if (e.contains("timeout")) ext.timeout_seconds = number(e, "timeout", "model.external");
    if (e.contains("workers")) ext.workers = static_cast<std::size_t>(number(e, "workers", "model.external"));
  } else {
    fail("model: 'external' must be a command string or an object");
  }
  return ext;
}

json meta_json(const DesignMeta& meta) {
  struct V {
    json operator()(const PlainMeta&) const { return json::object(); }
    json operator()(const LhsMeta& m) const {
      return {{"strata", m.strata}, {"replicates", m.replicates}, {"replicate", m.replicate}};
    }
    json operator()(const MorrisMeta& m) const {
      return {{"levels", m.levels},         {"delta", m.delta},   {"trajectories", m.trajectories},
              {"trajectory", m.trajectory}, {"factor", m.factor}, {"direction", m.direction}};
    }
    json operator()(const FastMeta& m) const {
      json blocks = json::array();
      for (const auto& b : m.blocks) blocks.push_back({{"omega", b.omega}, {"phase", b.phase}});
      return {{"mode", m.mode == FastMode::classic ? "classic" : "extended"},
              {"interference", m.interference},
              {"block_size", m.block_size},
              {"omega_max", m.omega_max},
              {"groups", m.groups},
              {"group_names", m.group_names},
              {"blocks", blocks}};
    }
    json operator()(const SaltelliMeta& m) const {
      return {{"base_size", m.base_size}, {"base", m.base == SaltelliBase::lptau ? "lptau" : "random"}};
    }
  };
  return std::visit(V{}, meta);
}

DesignMeta parse_meta(const std::string& method, const json& j) {
  if (method == "random" || method == "lptau" || method == "fixed") return PlainMeta{method};
  if (method == "lhs" || method == "rlhs") {
    return LhsMeta{j.at("strata").get<std::size_t>(), j.at("replicates").get<std::size_t>(),
                   j.at("replicate").get<std::vector<std::size_t>>()};
  }
  if (method == "morris") {
    MorrisMeta m;
    m.levels = j.at("levels").get<std::size_t>();
    m.delta = j.at("delta").get<double>();
    m.trajectories = j.at("trajectories").get<std::size_t>();
    m.trajectory = j.at("trajectory").get<std::vector<std::size_t>>();
    m.factor = j.at("factor").get<std::vector<std::size_t>>();
    m.direction = j.at("direction").get<std::vector<int>>();
    return m;
  }
  if (method == "fast-classic" || method == "fast-extended") {
    FastMeta m;
    m.mode = j.at("mode").get<std::string>() == "classic" ? FastMode::classic : FastMode::extended;
    m.interference = j.at("interference").get<std::size_t>();
    m.block_size = j.at("block_size").get<std::size_t>();
    m.omega_max = j.at("omega_max").get<std::size_t>();
    m.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
    m.group_names = j.at("group_names").get<std::vector<std::string>>();
    for (const auto& b : j.at("blocks")) {
      m.blocks.push_back({b.at("omega").get<std::vector<std::size_t>>(), b.at("phase").get<std::vector<double>>()});
    }
    return m;
  }
  if (method == "saltelli") {
    return SaltelliMeta{j.at("base_size").get<std::size_t>(),
                        j.at("base").get<std::string>() == "random" ? SaltelliBase::random : SaltelliBase::lptau};
  }
  fail("sidecar: unknown design method '" + method + "'");
}

}  // namespace

RunConfig parse_config_impl(const std::string& json_text);

RunConfig parse_config(const std::string& json_text) {
  try {
    return parse_config_impl(json_text);
  } catch (const json::exception& e) {
    fail(std::string("config has a wrongly typed entry: ") + e.what());
  }
}

RunConfig parse_config_impl(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config must be a JSON object");
  if (!doc.contains("factors") || !doc["factors"].is_array()) fail("config needs a 'factors' array");
  RunConfig cfg;
  std::size_t idx = 0;
  for (const auto& f : doc["factors"]) {
    ++idx;
    const std::string where = "factor " + std::to_string(idx);
    if (!f.is_object()) fail(where + ": must be an object");
    if (!f.contains("name") || !f["name"].is_string()) fail(where + ": 'name' must be a string");
    if (!f.contains("dist") || !f["dist"].is_string()) fail(where + ": 'dist' must be a string");
    const auto name = f["name"].get<std::string>();
    cfg.space.factors.push_back(
        {name, parse_dist(f["dist"].get<std::string>(), f.contains("params") ? f["params"] : json::object(),
                          where + " ('" + name + "')")});
  }
  if (doc.contains("correlation") && !doc["correlation"].is_null()) {
    const auto& c = doc["correlation"];
    if (!c.is_array()) fail("'correlation' must be an array of arrays");
    const auto k = static_cast<Eigen::Index>(c.size());
    Matrix m(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& row = c[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) fail("'correlation' must be square");
      for (Eigen::Index j = 0; j < k; ++j) {
        if (!row[static_cast<std::size_t>(j)].is_number()) fail("'correlation' entries must be numbers");
        m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
      }
    }
    cfg.space.correlation = std::move(m);
  }
  if (!doc.contains("model")) fail("config needs a 'model' section");
  cfg.model = parse_model(doc["model"], cfg.space.names(), doc.contains("outputs") ? doc["outputs"] : json());
  if (doc.contains("groups")) {
    const auto& g = doc["groups"];
    if (!g.is_array()) fail("'groups' must be an array");
    for (const auto& grp : g) {
      if (!grp.is_object() || !grp.contains("name") || !grp.contains("factors") || !grp["factors"].is_array()) {
        fail("each group needs 'name' and a 'factors' array");
      }
      FactorGroup fg{grp["name"].get<std::string>(), {}};
      for (const auto& n : grp["factors"]) {
        const auto i = cfg.space.index_of(n.get<std::string>());
        if (!i) fail("group '" + fg.name + "' names unknown factor '" + n.get<std::string>() + "'");
        fg.members.push_back(*i);
      }
      cfg.groups.push_back(std::move(fg));
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(Errc::io, std::string("config file: ") + e.what());
  }
  RunConfig cfg = parse_config(text);
  if (auto* ext = std::get_if<ExternalModel>(&cfg.model); ext && ext->working_directory.empty()) {
    ext->working_directory = std::filesystem::absolute(path).parent_path().string();
  }
  return cfg;
}

std::vector<std::string> validate_config(const RunConfig& config) {
  auto out = validate(config.space).violations;
  for (auto& m : check_model(config.model, config.space.size())) out.push_back("model: " + m);
  if (!config.groups.empty()) {
    std::vector<int> seen(config.space.size(), 0);
    for (const auto& g : config.groups) {
      if (g.members.empty()) out.push_back("group '" + g.name + "' is empty");
      for (auto m : g.members) ++seen[m];
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] != 1) {
        out.push_back("factor '" + config.space.factors[i].name + "' must belong to exactly one group");
      }
    }
  }
  return out;
}

std::string sidecar_json(const SampleSidecar& s) {
  json j;
  j["method"] = s.method;
  j["seed"] = s.seed;
  j["rows"] = s.rows;
  j["factors"] = s.factors;
  j["unit_file"] = s.unit_file;
  j["correlated"] = s.correlated;
  j["meta"] = meta_json(s.meta);
  return j.dump(2) + "\n";
}

SampleSidecar parse_sidecar(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    SampleSidecar s;
    s.method = j.at("method").get<std::string>();
    s.seed = j.at("seed").get<Seed>();
    s.rows = j.at("rows").get<std::size_t>();
    s.factors = j.at("factors").get<std::vector<std::string>>();
    s.unit_file = j.at("unit_file").get<std::string>();
    s.correlated = j.at("correlated").get<bool>();
    s.meta = parse_meta(s.method, j.at("meta"));
    return s;
  } catch (const json::exception& e) {
    fail(std::string("sidecar metadata is malformed: ") + e.what());
  }
}

}  // namespace gsa
