#include "collapseloc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "collapseloc/report.hpp"

namespace collapseloc {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A bare scenario name stands for {"scenario": name}.
json load_tree(const std::string& source) {
  if (scenario_from_name(source)) return json{{"scenario", source}};
  return parse_json_text(read_file(source));
}

void apply_models(json& tree, const std::vector<std::string>& models) {
  if (!models.empty()) {
    tree["model"] = models;
  } else if (!tree.contains("model") && tree.is_object() && tree.contains("scenario") &&
             tree["scenario"].is_string()) {
    if (auto id = scenario_from_name(tree["scenario"].get<std::string>())) {
      tree["model"] = std::string(default_model(*id));
    }
  }
}

int cmd_analyze(const std::string& source, const std::vector<std::string>& models,
                std::optional<double> safety_k, std::ostream& out) {
  json tree = load_tree(source);
  apply_models(tree, models);
  if (safety_k && tree.is_object()) tree["safety_k"] = *safety_k;
  const ConfigDocument doc = parse_config_tree(tree);
  const Report report = analyze(doc);
  out << emit_report(report);
  return report.any_model_failed() ? kExitModel : kExitOk;
}

struct SimulateArgs {
  std::string source;
  std::string engine;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string csv;
  std::string model;
  std::string sampling;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  json tree = load_tree(a.source);
  apply_models(tree, a.model.empty() ? std::vector<std::string>{} : std::vector<std::string>{a.model});
  if (tree.is_object()) {
    tree["engine"] = a.engine;
    tree["trials"] = a.trials;
    tree["seed"] = a.seed;
    if (!a.sampling.empty()) tree["collapse_sampling"] = a.sampling;
  }
  ConfigDocument doc = parse_config_tree(tree);
  doc.models.resize(1);

  TrialOptions opts;
  opts.sampling = doc.sampling;
  opts.analysis = doc.analysis;
  const auto records = run_trials(doc.experiment, doc.models.front(), doc.engine, doc.trials, doc.seed, opts);

  Report report = analyze(doc);
  SimulationSummary sim;
  sim.model = doc.models.front().name;
  sim.engine = doc.engine;
  sim.chsh = chsh_estimate(records);
  for (const auto& r : records) sim.spacelike_count += r.causal_class.separation == Separation::Spacelike;
  report.simulation = sim;

  if (!a.csv.empty()) {
    std::ofstream csv(a.csv, std::ios::binary);
    if (!csv) throw ConfigError("--csv", "cannot open '" + a.csv + "' for writing");
    write_trial_csv(csv, records);
  }
  out << emit_report(report);
  return kExitOk;
}

int cmd_collapse_time(const std::vector<std::string>& models, const std::string& source, std::ostream& out,
                      std::ostream& err) {
  ApparatusSpec apparatus;
  PhysicalConstants k;
  if (auto id = scenario_from_name(source)) {
    const auto config = build_scenario(*id);
    const auto* device = std::get_if<DeviceObserver>(&config.wing_L.observer);
    if (!device) throw ConfigError("apparatus", "scenario '" + source + "' has no device apparatus");
    apparatus = device->apparatus;
  } else {
    json tree = parse_json_text(read_file(source));
    if (tree.is_object() && tree.contains("apparatus")) tree = tree["apparatus"];
    apparatus = parse_apparatus(tree, "apparatus");
  }

  std::vector<CollapseModel> selected;
  try {
    if (models.empty()) {
      for (auto name : model_preset_names()) selected.push_back(model_preset(name));
    } else {
      for (const auto& name : models) selected.push_back(model_preset(name));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--model", e.what());
  }

  json estimates = json::array();
  bool failed = false;
  for (const auto& m : selected) {
    const auto est = apparatus_tau(apparatus, m, k);
    json e = {{"model", m.name}, {"kind", std::string(to_string(est.model))}};
    if (est.collapses()) {
      e["tau_s"] = est.tau;
    } else {
      e["tau_s"] = nullptr;
      e["error"] = "model predicts no collapse at this apparatus";
      err << m.name << ": model predicts no collapse at this apparatus\n";
      failed = true;
    }
    if (m.kind == ModelKind::Csl) {
      e["sliver_nucleons_count"] = sliver_nucleons(apparatus, k);
      e["face_area_m2"] = apparatus.face_area();
    }
    if (m.kind == ModelKind::Grw) {
      const double half = grw_effective_displacement(apparatus).second;
      e["system_nucleons_count"] = nucleon_count(apparatus.mirror_mass + apparatus.attached_mass, k);
      e["tau_half_displacement_s"] =
          grw_tau(m.params, nucleon_count(apparatus.mirror_mass + apparatus.attached_mass, k), half).tau;
    }
    estimates.push_back(std::move(e));
  }
  out << canonical_json({{"apparatus", apparatus_to_json(apparatus)}, {"estimates", estimates}});
  return failed ? kExitModel : kExitOk;
}

int cmd_scenarios(const std::string& action, const std::string& name, std::ostream& out) {
  if (action == "list") {
    for (ScenarioId id : all_scenarios()) out << scenario_name(id) << "\n";
    return kExitOk;
  }
  auto id = scenario_from_name(name);
  if (!id) throw ConfigError("scenario", "unknown scenario '" + name + "'");
  json tree{{"scenario", name}, {"model", std::string(default_model(*id))}};
  out << "# " << scenario_description(*id) << "\n" << emit_config(parse_config_tree(tree));
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collapse-locality Bell experiment design and simulation toolkit", "collapseloc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config_source;
  std::vector<std::string> models;
  std::optional<double> safety_k;

  auto* analyze_cmd = app.add_subcommand("analyze", "Loophole verdicts and margins for a scenario or config file");
  analyze_cmd->add_option("config", config_source, "Scenario name or JSON config path")->required();
  analyze_cmd->add_option("--model", models, "Collapse model preset (repeatable)");
  analyze_cmd->add_option("--safety-k", safety_k, "Multiplier on collapse times");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo Bell trials and CHSH statistics");
  simulate_cmd->add_option("config", sim.source, "Scenario name or JSON config path")->required();
  simulate_cmd->add_option("--engine", sim.engine, "qm or causal")->required()->check(CLI::IsMember({"qm", "causal"}));
  simulate_cmd->add_option("--trials", sim.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim.seed, "64-bit seed")->required();
  simulate_cmd->add_option("--csv", sim.csv, "Write the per-trial log to this path");
  simulate_cmd->add_option("--model", sim.model, "Collapse model preset");
  simulate_cmd->add_option("--sampling", sim.sampling, "exponential or deterministic")
      ->check(CLI::IsMember({"exponential", "deterministic"}));

  std::vector<std::string> ct_models;
  std::string apparatus_source;
  auto* collapse_cmd = app.add_subcommand("collapse-time", "Collapse-time estimates for an apparatus");
  collapse_cmd->add_option("--model", ct_models, "Collapse model preset (repeatable; default all)");
  collapse_cmd->add_option("--apparatus", apparatus_source, "Scenario name or JSON apparatus path")->required();

  std::string action = "list";
  std::string scenario;
  auto* scenarios_cmd = app.add_subcommand("scenarios", "List or show built-in scenarios");
  scenarios_cmd->add_option("action", action, "list or show")->check(CLI::IsMember({"list", "show"}));
  scenarios_cmd->add_option("name", scenario, "Scenario to show");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(config_source, models, safety_k, out);
    if (simulate_cmd->parsed()) return cmd_simulate(sim, out);
    if (collapse_cmd->parsed()) return cmd_collapse_time(ct_models, apparatus_source, out, err);
    if (scenarios_cmd->parsed()) {
      if (action == "show" && scenario.empty()) {
        err << "error: scenarios show requires a NAME\n";
        return kExitUsage;
      }
      return cmd_scenarios(action, scenario, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::domain_error& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

} // namespace collapseloc
