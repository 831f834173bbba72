#include "collapseloc/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace collapseloc {

using nlohmann::json;

namespace {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

void write_canonical(const json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) { // std::map: sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        write_canonical(value, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_canonical(j[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

json window_to_json(const StationWindow& w) {
  return {{"pos_m", {w.pos.x(), w.pos.y(), w.pos.z()}}, {"t_start_s", w.t_start}, {"t_end_s", w.t_end}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Eq.-(1)-style CSL reading of a device apparatus, stated alongside the
// commonly quoted figure for the tabletop mirror.
void csl_notes(const ConfigDocument& doc, std::vector<std::string>& notes) {
  const auto* device = std::get_if<DeviceObserver>(&doc.experiment.wing_L.observer);
  if (!device) return;
  const auto& k = doc.experiment.constants;
  for (const auto& m : doc.models) {
    if (m.kind != ModelKind::Csl) continue;
    const double n = sliver_nucleons(device->apparatus, k);
    const double area = device->apparatus.face_area();
    const auto est = csl_tau(m.params, n, area);
    std::string note = m.name + ": sliver reading N = " + fmt("%.4e", n) + ", A = " + fmt("%.4e", area) +
                       " m^2 gives tau = " + fmt("%.4e", est.tau) + " s";
    if (device->apparatus == salart_apparatus(k) && m.params == model_preset("csl-standard").params) {
      note += "; the commonly quoted estimate for this mirror is ~1e-08 s, which this N/A mapping does not reproduce";
    }
    notes.push_back(note);
  }
}

} // namespace

bool Report::any_model_failed() const {
  for (const auto& m : models) {
    if (!m.error.empty()) return true;
  }
  return false;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

Report analyze(const ConfigDocument& doc) {
  Report r;
  r.subject = doc.scenario ? std::string(scenario_name(*doc.scenario)) : "custom";
  r.max_collapse_window = max_collapse_window(doc.experiment);
  r.sync_delays = sync_delays(doc.experiment);
  r.inputs_simultaneous = inputs_simultaneous(doc.experiment, doc.analysis.simultaneity_tolerance);
  r.provenance.input_hash = fnv1a_hex(emit_config(doc));
  r.provenance.seed = doc.seed;

  for (const auto& model : doc.models) {
    ModelReport m;
    m.model = model.name;
    try {
      m.verdict = verdict(doc.experiment, model, doc.analysis);
      if (m.verdict->essential_closed) m.margin_factor = margin_factor(doc.experiment, model, doc.analysis);
      m.discrimination = discriminates(doc.experiment, model, doc.analysis);
    } catch (const ModelError& e) {
      m.verdict.reset();
      m.error = e.what();
    }
    r.models.push_back(std::move(m));
  }
  csl_notes(doc, r.notes);
  return r;
}

json report_to_json(const Report& r) {
  json models = json::array();
  for (const auto& m : r.models) {
    json j = {{"model", m.model}};
    if (!m.error.empty()) j["error"] = m.error;
    if (m.verdict) {
      const auto& v = *m.verdict;
      j["essential_closed"] = v.essential_closed;
      j["extended_closed"] = v.extended_closed;
      j["essential_margin_s"] = v.essential_margin;
      j["extended_margin_s"] = v.extended_margin;
      j["tau_L_s"] = v.tau_values.first;
      j["tau_R_s"] = v.tau_values.second;
      j["window_L"] = window_to_json(v.collapse_windows.first);
      j["window_R"] = window_to_json(v.collapse_windows.second);
    }
    if (m.margin_factor) j["margin_factor_dimless"] = *m.margin_factor;
    if (m.discrimination) {
      const auto& d = *m.discrimination;
      j["discrimination"] = {{"discriminates", d.discriminates()},
                             {"predicted_s_qm_dimless", d.predicted_s_qm},
                             {"predicted_s_causal_dimless", d.predicted_s_causal},
                             {"gap_dimless", d.gap}};
    }
    models.push_back(std::move(j));
  }

  json out = {{"subject", r.subject},
              {"verdicts", models},
              {"max_collapse_window_s", r.max_collapse_window},
              {"sync_delay_L_s", r.sync_delays.first},
              {"sync_delay_R_s", r.sync_delays.second},
              {"inputs_simultaneous", r.inputs_simultaneous},
              {"notes", r.notes},
              {"provenance",
               {{"input_hash", r.provenance.input_hash},
                {"seed", r.provenance.seed},
                {"tool_version", r.provenance.tool_version}}}};
  if (r.simulation) {
    const auto& s = *r.simulation;
    const auto& c = s.chsh;
    json corr = json::object();
    json counts = json::object();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const std::string key = "E" + std::to_string(i + 1) + std::to_string(j + 1);
        corr[key + "_dimless"] = c.correlations[i][j];
        counts[key + "_count"] = c.counts[i][j];
      }
    }
    out["simulation"] = {{"model", s.model},
                         {"engine", std::string(to_string(s.engine))},
                         {"trials_count", c.n},
                         {"spacelike_count", s.spacelike_count},
                         {"s_hat_dimless", c.s_hat},
                         {"s_abs_dimless", c.magnitude()},
                         {"std_err_dimless", c.std_err},
                         {"s_game_dimless", c.s_game},
                         {"p_bound_prob", c.p_bound},
                         {"correlations", corr},
                         {"pair_counts", counts}};
  }
  return out;
}

std::string canonical_json(const json& j) {
  std::string out;
  write_canonical(j, out, 0);
  out += "\n";
  return out;
}

std::string emit_report(const Report& r) { return canonical_json(report_to_json(r)); }

} // namespace collapseloc
