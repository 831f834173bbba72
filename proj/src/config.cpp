#include "collapseloc/config.hpp"

#include <cmath>
#include <set>

namespace collapseloc {

using nlohmann::json;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string_view type_name(const json& j) {
  return j.type_name();
}

double as_number(const json& j, const std::string& path) {
  if (j.is_string()) {
    throw ConfigError(path, "expected a bare SI number (units are fixed by the key name), got string \"" +
                                j.get<std::string>() + "\"");
  }
  if (!j.is_number()) throw ConfigError(path, "expected number, got " + std::string(type_name(j)));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "number must be finite");
  return v;
}

std::uint64_t as_count(const json& j, const std::string& path) {
  if (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer() || j.is_number_float()) {
      throw ConfigError(path, "expected a non-negative integer");
    }
    throw ConfigError(path, "expected integer, got " + std::string(type_name(j)));
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected string, got " + std::string(type_name(j)));
  return j.get<std::string>();
}

Eigen::Vector3d as_vector3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
  Eigen::Vector3d v;
  for (std::size_t i = 0; i < 3; ++i) v[static_cast<int>(i)] = as_number(j[i], index_path(path, i));
  return v;
}

std::array<double, 2> as_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected an array of 2 numbers");
  return {as_number(j[0], index_path(path, 0)), as_number(j[1], index_path(path, 1))};
}

// Tracks which keys of an object were consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(path_, "expected object, got " + std::string(type_name(j_)));
    }
  }

  const json* optional(std::string_view key) {
    used_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const json& required(std::string_view key) {
    const json* v = optional(key);
    if (!v) throw ConfigError(join(path_, key), "required key is missing");
    return *v;
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  std::string at(std::string_view key) const { return join(path_, key); }

  double number(std::string_view key) { return as_number(required(key), at(key)); }
  double number_or(std::string_view key, double fallback) {
    const json* v = optional(key);
    return v ? as_number(*v, at(key)) : fallback;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(join(path_, key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename F>
auto rethrow_as_config(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

SpacetimeEvent parse_event(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SpacetimeEvent e{r.number("t_s"), as_vector3(r.required("pos_m"), r.at("pos_m"))};
  r.finish();
  return e;
}

json event_to_json(const SpacetimeEvent& e) {
  return {{"t_s", e.t}, {"pos_m", {e.pos.x(), e.pos.y(), e.pos.z()}}};
}

Site parse_site(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  if (r.has("pos_m")) {
    Eigen::Vector3d v = as_vector3(r.required("pos_m"), r.at("pos_m"));
    r.finish();
    return v;
  }
  GeoPoint g{r.number("lat_rad"), r.number("lon_rad"), r.number_or("alt_m", 0.0)};
  r.finish();
  rethrow_as_config(path, [&] { validate(g); return 0; });
  return g;
}

json site_to_json(const Site& s) {
  if (const auto* g = std::get_if<GeoPoint>(&s)) {
    return {{"lat_rad", g->latitude}, {"lon_rad", g->longitude}, {"alt_m", g->altitude}};
  }
  const auto& v = std::get<Eigen::Vector3d>(s);
  return {{"pos_m", {v.x(), v.y(), v.z()}}};
}

Observer parse_observer(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = as_string(r.required("type"), r.at("type"));
  Observer out;
  if (type == "device") {
    out = DeviceObserver{parse_apparatus(r.required("apparatus"), r.at("apparatus"))};
  } else if (type == "human") {
    const double p = r.number("perception_s");
    if (!(p > 0)) throw ConfigError(r.at("perception_s"), "perception time must be > 0");
    out = HumanObserver{p};
  } else {
    throw ConfigError(r.at("type"), "expected \"device\" or \"human\"");
  }
  r.finish();
  return out;
}

json observer_to_json(const Observer& o) {
  if (const auto* h = std::get_if<HumanObserver>(&o)) {
    return {{"type", "human"}, {"perception_s", h->perception_time}};
  }
  return {{"type", "device"}, {"apparatus", apparatus_to_json(std::get<DeviceObserver>(o).apparatus)}};
}

WingSpec parse_wing(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  WingSpec w;
  w.detector_event = parse_event(r.required("detector"), r.at("detector"));
  w.channel_delay = r.number("channel_delay_s");
  w.added_sync_delay = r.number_or("sync_delay_s", 0.0);
  w.amplifier_site = parse_site(r.required("amplifier"), r.at("amplifier"));
  w.observer = parse_observer(r.required("observer"), r.at("observer"));
  r.finish();
  return w;
}

json wing_to_json(const WingSpec& w) {
  return {{"detector", event_to_json(w.detector_event)},
          {"channel_delay_s", w.channel_delay},
          {"sync_delay_s", w.added_sync_delay},
          {"amplifier", site_to_json(w.amplifier_site)},
          {"observer", observer_to_json(w.observer)}};
}

PhysicalConstants parse_constants(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  PhysicalConstants k;
  k.c = r.number_or("c_m_per_s", k.c);
  k.hbar = r.number_or("hbar_J_s", k.hbar);
  k.G = r.number_or("G_m3_per_kg_s2", k.G);
  k.nucleon_mass = r.number_or("nucleon_mass_kg", k.nucleon_mass);
  k.earth_diameter = r.number_or("earth_diameter_m", k.earth_diameter);
  r.finish();
  rethrow_as_config(path, [&] { validate(k); return 0; });
  return k;
}

json constants_to_json(const PhysicalConstants& k) {
  return {{"c_m_per_s", k.c},
          {"hbar_J_s", k.hbar},
          {"G_m3_per_kg_s2", k.G},
          {"nucleon_mass_kg", k.nucleon_mass},
          {"earth_diameter_m", k.earth_diameter}};
}

ExperimentConfig parse_experiment(const json& j, const std::string& path, const PhysicalConstants& k) {
  ObjectReader r(j, path);
  ExperimentConfig c;
  c.constants = k;
  c.source_event = parse_event(r.required("source"), r.at("source"));
  {
    ObjectReader s(r.required("settings"), r.at("settings"));
    c.settings.angles_L = as_pair(s.required("L_rad"), s.at("L_rad"));
    c.settings.angles_R = as_pair(s.required("R_rad"), s.at("R_rad"));
    s.finish();
  }
  c.wing_L = parse_wing(r.required("L"), r.at("L"));
  c.wing_R = parse_wing(r.required("R"), r.at("R"));
  r.finish();
  rethrow_as_config(path, [&] { validate(c); return 0; });
  return c;
}

json experiment_to_json(const ExperimentConfig& c) {
  return {{"source", event_to_json(c.source_event)},
          {"settings",
           {{"L_rad", {c.settings.angles_L[0], c.settings.angles_L[1]}},
            {"R_rad", {c.settings.angles_R[0], c.settings.angles_R[1]}}}},
          {"L", wing_to_json(c.wing_L)},
          {"R", wing_to_json(c.wing_R)}};
}

json model_to_json(const CollapseModel& m) {
  for (auto name : model_preset_names()) {
    if (m == model_preset(name)) return std::string(name);
  }
  json j = {{"name", m.name}};
  switch (m.kind) {
    case ModelKind::Csl: j["kind"] = "csl"; break;
    case ModelKind::Grw: j["kind"] = "grw"; break;
    case ModelKind::DpDiosi: j["kind"] = "dp-diosi"; return j;
    case ModelKind::DpPenrose: j["kind"] = "dp-penrose"; return j;
  }
  j["rate_lambda_per_s"] = m.params.rate_lambda;
  j["length_a_m"] = m.params.length_a;
  return j;
}

} // namespace

std::string_view to_string(Engine e) {
  return e == Engine::StandardQm ? "qm" : "causal";
}

ApparatusSpec parse_apparatus(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ApparatusSpec s;
  s.mirror_mass = r.number("mirror_mass_kg");
  s.mirror_dims = as_vector3(r.required("mirror_dims_m"), r.at("mirror_dims_m"));
  s.displacement_d = r.number("displacement_m");
  if (const json* axis = r.optional("displacement_axis")) {
    const std::string name = as_string(*axis, r.at("displacement_axis"));
    s.displacement_axis = rethrow_as_config(r.at("displacement_axis"), [&] { return axis_from_string(name); });
  }
  s.attached_mass = r.number_or("attached_mass_kg", 0.0);
  s.actuation_time = r.number_or("actuation_s", 0.0);
  r.finish();
  rethrow_as_config(path, [&] { validate(s); return 0; });
  return s;
}

json apparatus_to_json(const ApparatusSpec& s) {
  return {{"mirror_mass_kg", s.mirror_mass},
          {"mirror_dims_m", {s.mirror_dims.x(), s.mirror_dims.y(), s.mirror_dims.z()}},
          {"displacement_m", s.displacement_d},
          {"displacement_axis", std::string(to_string(s.displacement_axis))},
          {"attached_mass_kg", s.attached_mass},
          {"actuation_s", s.actuation_time}};
}

CollapseModel parse_model(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    return rethrow_as_config(path, [&] { return model_preset(name); });
  }
  ObjectReader r(j, path);
  CollapseModel m;
  m.name = as_string(r.required("name"), r.at("name"));
  const std::string kind = as_string(r.required("kind"), r.at("kind"));
  if (kind == "csl" || kind == "grw") {
    m.kind = kind == "csl" ? ModelKind::Csl : ModelKind::Grw;
    m.params = {r.number("rate_lambda_per_s"), r.number("length_a_m")};
    rethrow_as_config(path, [&] { validate(m.params); return 0; });
  } else if (kind == "dp-diosi") {
    m.kind = ModelKind::DpDiosi;
  } else if (kind == "dp-penrose") {
    m.kind = ModelKind::DpPenrose;
  } else {
    throw ConfigError(r.at("kind"), "expected one of csl, grw, dp-diosi, dp-penrose");
  }
  r.finish();
  return m;
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", "syntax error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + " (byte " + std::to_string(e.byte) + ")");
  } catch (const json::exception& e) {
    throw ConfigError("", e.what()); // e.g. number overflow
  }
}

ConfigDocument parse_config(std::string_view text) {
  return parse_config_tree(parse_json_text(text));
}

namespace {

ConfigDocument parse_document(const json& tree) {
  ObjectReader r(tree, "");
  ConfigDocument doc;

  PhysicalConstants k;
  if (const json* c = r.optional("constants")) k = parse_constants(*c, "constants");

  if (const json* s = r.optional("scenario")) {
    const std::string name = as_string(*s, "scenario");
    doc.scenario = scenario_from_name(name);
    if (!doc.scenario) throw ConfigError("scenario", "unknown scenario '" + name + "'");
  }
  doc.scenario_params.observer_altitude = r.number_or("observer_altitude_m", doc.scenario_params.observer_altitude);
  doc.scenario_params.perception_time = r.number_or("perception_s", doc.scenario_params.perception_time);

  if (const json* e = r.optional("experiment")) {
    doc.experiment = parse_experiment(*e, "experiment", k);
  } else if (doc.scenario) {
    doc.experiment = rethrow_as_config("scenario", [&] { return build_scenario(*doc.scenario, doc.scenario_params, k); });
  } else {
    throw ConfigError("experiment", "required key is missing (or give \"scenario\")");
  }

  const json& models = r.required("model");
  if (models.is_array()) {
    if (models.empty()) throw ConfigError("model", "at least one model is required");
    for (std::size_t i = 0; i < models.size(); ++i) doc.models.push_back(parse_model(models[i], index_path("model", i)));
  } else {
    doc.models.push_back(parse_model(models, "model"));
  }

  if (const json* e = r.optional("engine")) {
    const std::string name = as_string(*e, "engine");
    if (name == "qm") doc.engine = Engine::StandardQm;
    else if (name == "causal") doc.engine = Engine::CausalCollapse;
    else throw ConfigError("engine", "expected \"qm\" or \"causal\"");
  }
  if (const json* t = r.optional("trials")) {
    doc.trials = as_count(*t, "trials");
    if (doc.trials == 0) throw ConfigError("trials", "must be >= 1");
  }
  if (const json* s = r.optional("seed")) doc.seed = as_count(*s, "seed");
  if (const json* s = r.optional("collapse_sampling")) {
    const std::string name = as_string(*s, "collapse_sampling");
    if (name == "exponential") doc.sampling = CollapseSampling::Exponential;
    else if (name == "deterministic") doc.sampling = CollapseSampling::Deterministic;
    else throw ConfigError("collapse_sampling", "expected \"exponential\" or \"deterministic\"");
  }
  doc.analysis.safety_k = r.number_or("safety_k", 1.0);
  if (!(doc.analysis.safety_k >= 0)) throw ConfigError("safety_k", "must be >= 0");
  if (const json* g = r.optional("grw_displacement")) {
    const std::string name = as_string(*g, "grw_displacement");
    if (name == "full") doc.analysis.grw = GrwDisplacement::Full;
    else if (name == "half") doc.analysis.grw = GrwDisplacement::Half;
    else throw ConfigError("grw_displacement", "expected \"full\" or \"half\"");
  }
  doc.analysis.simultaneity_tolerance = r.number_or("simultaneity_tolerance_s", 1e-6);
  if (!(doc.analysis.simultaneity_tolerance >= 0)) {
    throw ConfigError("simultaneity_tolerance_s", "must be >= 0");
  }
  r.finish();
  return doc;
}

} // namespace

ConfigDocument parse_config_tree(const json& tree) {
  try {
    return parse_document(tree);
  } catch (const json::exception& e) {
    throw ConfigError("", e.what());
  }
}

json config_to_json(const ConfigDocument& doc) {
  json j;
  if (doc.scenario) j["scenario"] = std::string(scenario_name(*doc.scenario));
  j["observer_altitude_m"] = doc.scenario_params.observer_altitude;
  j["perception_s"] = doc.scenario_params.perception_time;
  j["constants"] = constants_to_json(doc.experiment.constants);
  j["experiment"] = experiment_to_json(doc.experiment);
  json models = json::array();
  for (const auto& m : doc.models) models.push_back(model_to_json(m));
  j["model"] = models;
  j["engine"] = std::string(to_string(doc.engine));
  j["trials"] = doc.trials;
  j["seed"] = doc.seed;
  j["collapse_sampling"] = doc.sampling == CollapseSampling::Exponential ? "exponential" : "deterministic";
  j["safety_k"] = doc.analysis.safety_k;
  j["grw_displacement"] = doc.analysis.grw == GrwDisplacement::Full ? "full" : "half";
  j["simultaneity_tolerance_s"] = doc.analysis.simultaneity_tolerance;
  return j;
}

std::string emit_config(const ConfigDocument& doc) {
  return config_to_json(doc).dump(2) + "\n";
}

} // namespace collapseloc
