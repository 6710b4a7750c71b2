#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsl/model.hpp"
#include "qsl/types.hpp"

namespace qsl {

using Json = nlohmann::json;

struct OutputPaths {
  std::string series;     // mean/std time series (or density-matrix series)
  std::string histogram;  // terminal histogram
  std::string paths;      // per-realization survival series
};

struct LoadedScenario {
  Scenario scenario;
  OutputPaths outputs;
  std::string preset_name;  // empty when loaded from a config file
};

inline const char* frame_name(Frame f) {
  switch (f) {
    case Frame::Lab: return "lab";
    case Frame::RwaFull: return "rwa";
    case Frame::RwaNaive: return "rwa-naive";
  }
  return "?";
}

inline Frame frame_from_name(const std::string& s) {
  if (s == "lab") return Frame::Lab;
  if (s == "rwa") return Frame::RwaFull;
  if (s == "rwa-naive") return Frame::RwaNaive;
  throw ConfigError("unknown frame '" + s + "' (expected lab, rwa or rwa-naive)");
}

inline const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::White: return "white";
    case NoiseKind::Ou: return "ou";
  }
  return "?";
}

namespace detail {

inline void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> known,
                                const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key '" + where + item.key() + "'");
  }
}

inline double number_at(const Json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

inline int axis_from_name(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw ConfigError("unknown noise axis '" + s + "' (expected x, y or z)");
}

// scalar broadcast or per-axis array aligned with the axes list
inline void fill_per_axis(const Json& j, const std::string& key,
                          const std::vector<int>& axes, std::array<double, 3>& dst) {
  const Json& v = j.at(key);
  if (v.is_number()) {
    for (int a : axes) dst[static_cast<size_t>(a)] = v.get<double>();
  } else if (v.is_array()) {
    if (v.size() != axes.size())
      throw ConfigError("'noise." + key + "' array must match the axes list in length");
    for (size_t i = 0; i < axes.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError("'noise." + key + "' entries must be numbers");
      dst[static_cast<size_t>(axes[i])] = v[i].get<double>();
    }
  } else {
    throw ConfigError("'noise." + key + "' must be a number or an array of numbers");
  }
}

}  // namespace detail

// Strict parse of a scenario object: every key checked, unknown keys rejected
// with their path, physics defaults applied (dt = 1e-3; t_final = 60, or 20
// for OU noise; n_realizations = 100). A seed is required whenever noise is
// present, so stochastic results are reproducible by construction.
inline LoadedScenario parse_scenario_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  detail::reject_unknown_keys(j,
                              {"frame", "delta", "omega_drive", "rabi", "noise", "t_final", "dt",
                               "n_realizations", "seed", "outputs"},
                              "");

  LoadedScenario out;
  Scenario& s = out.scenario;

  if (!j.contains("frame")) throw ConfigError("missing key 'frame'");
  if (!j.at("frame").is_string()) throw ConfigError("'frame' must be a string");
  s.frame = frame_from_name(j.at("frame").get<std::string>());

  if (j.contains("delta")) s.params.delta = detail::number_at(j, "delta");
  if (j.contains("rabi")) s.params.rabi = detail::number_at(j, "rabi");
  if (j.contains("omega_drive")) {
    const double w = detail::number_at(j, "omega_drive");
    if (w != 1.0)
      throw ConfigError("'omega_drive' is fixed to 1 (all rates are in units of the drive)");
  }

  bool have_noise = false;
  if (j.contains("noise")) {
    const Json& n = j.at("noise");
    if (!n.is_object()) throw ConfigError("'noise' must be an object");
    detail::reject_unknown_keys(n, {"kind", "axes", "w0", "theta"}, "noise.");
    if (!n.contains("kind") || !n.at("kind").is_string())
      throw ConfigError("'noise.kind' must be a string (white or ou)");
    const std::string kind = n.at("kind").get<std::string>();
    if (kind == "white")
      s.noise.kind = NoiseKind::White;
    else if (kind == "ou")
      s.noise.kind = NoiseKind::Ou;
    else
      throw ConfigError("unknown noise kind '" + kind + "' (expected white or ou)");

    if (!n.contains("axes") || !n.at("axes").is_array() || n.at("axes").empty())
      throw ConfigError("'noise.axes' must be a non-empty array of axis names");
    std::vector<int> axes;
    for (const auto& a : n.at("axes")) {
      if (!a.is_string()) throw ConfigError("'noise.axes' entries must be strings");
      const int idx = detail::axis_from_name(a.get<std::string>());
      for (int seen : axes)
        if (seen == idx) throw ConfigError("duplicate noise axis '" + a.get<std::string>() + "'");
      axes.push_back(idx);
    }

    if (!n.contains("w0")) throw ConfigError("missing key 'noise.w0'");
    s.noise.w0 = {0.0, 0.0, 0.0};
    detail::fill_per_axis(n, "w0", axes, s.noise.w0);
    if (s.noise.kind == NoiseKind::Ou) {
      if (!n.contains("theta")) throw ConfigError("'noise.theta' is required for ou noise");
      s.noise.theta = {0.0, 0.0, 0.0};
      detail::fill_per_axis(n, "theta", axes, s.noise.theta);
    } else if (n.contains("theta")) {
      throw ConfigError("'noise.theta' only applies to ou noise");
    }
    have_noise = s.noise.any();
  }

  s.grid.dt = j.contains("dt") ? detail::number_at(j, "dt") : 1e-3;
  const double default_t = (s.noise.kind == NoiseKind::Ou) ? 20.0 : 60.0;
  s.grid.t_final = j.contains("t_final") ? detail::number_at(j, "t_final") : default_t;

  if (j.contains("n_realizations")) {
    if (!j.at("n_realizations").is_number_integer())
      throw ConfigError("'n_realizations' must be an integer");
    s.n_realizations = j.at("n_realizations").get<long>();
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      throw ConfigError("'seed' must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  } else if (have_noise) {
    throw ConfigError("'seed' is required for stochastic runs");
  }

  if (j.contains("outputs")) {
    const Json& o = j.at("outputs");
    if (!o.is_object()) throw ConfigError("'outputs' must be an object");
    detail::reject_unknown_keys(o, {"series", "histogram", "paths"}, "outputs.");
    const auto str = [&](const char* key) -> std::string {
      if (!o.contains(key)) return {};
      if (!o.at(key).is_string()) throw ConfigError(std::string("'outputs.") + key + "' must be a string");
      return o.at(key).get<std::string>();
    };
    out.outputs.series = str("series");
    out.outputs.histogram = str("histogram");
    out.outputs.paths = str("paths");
  }

  s.validate();
  return out;
}

inline LoadedScenario parse_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_scenario_json(j);
}

// ---- presets ---------------------------------------------------------------

namespace detail {

inline Scenario preset_base(Frame f, double delta) {
  Scenario s;
  s.frame = f;
  s.params.delta = delta;
  s.params.rabi = 0.2;
  s.grid.dt = 1e-3;
  s.grid.t_final = 60.0;
  s.n_realizations = 100;
  s.seed = 12345;
  return s;
}

inline void set_white(Scenario& s, std::initializer_list<int> axes, double w0) {
  s.noise.kind = NoiseKind::White;
  for (int a : axes) s.noise.w0[static_cast<size_t>(a)] = w0;
}

inline void set_ou(Scenario& s, std::initializer_list<int> axes, double w0, double theta) {
  s.noise.kind = NoiseKind::Ou;
  for (int a : axes) {
    s.noise.w0[static_cast<size_t>(a)] = w0;
    s.noise.theta[static_cast<size_t>(a)] = theta;
  }
  s.grid.t_final = 20.0;
}

}  // namespace detail

// name -> one-line description, in display order
inline const std::vector<std::pair<std::string, std::string>>& preset_table() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"fig1a", "resonant drive, white z-noise, lab frame: mean/std of P_b"},
      {"fig1b", "resonant drive, white z-noise, rotating frame"},
      {"fig2a", "terminal-time histogram companion to fig1a"},
      {"fig2b", "terminal-time histogram, isotropic white noise, lab frame"},
      {"fig3a", "resonant drive, isotropic white noise, lab frame"},
      {"fig3b", "resonant drive, isotropic white noise, rotating frame"},
      {"fig3c", "resonant drive, isotropic white noise, rotating frame with bare operators"},
      {"fig4a", "detuned drive (delta = 1.2), isotropic white noise, lab frame"},
      {"fig4b", "detuned drive (delta = 1.2), isotropic white noise, rotating frame"},
      {"fig4c", "detuned drive (delta = 1.2), isotropic white noise, bare operators"},
      {"fig5a", "resonant drive, transverse OU noise, lab frame"},
      {"fig5b", "resonant drive, transverse OU noise, rotating frame"},
      {"fig5c", "resonant drive, transverse OU noise, bare operators"},
      {"fig6a", "detuned drive (delta = 1.2), isotropic OU noise, lab frame"},
      {"fig6b", "detuned drive (delta = 1.2), isotropic OU noise, rotating frame"},
      {"fig6c", "detuned drive (delta = 1.2), isotropic OU noise, bare operators"},
      {"det-lab", "noise-free resonant drive, lab frame, single trajectory"},
      {"det-rwa", "noise-free resonant drive, rotating frame, single trajectory"},
  };
  return table;
}

inline LoadedScenario preset(const std::string& name) {
  using detail::preset_base;
  using detail::set_ou;
  using detail::set_white;
  LoadedScenario out;
  out.preset_name = name;
  Scenario& s = out.scenario;

  const auto frame_abc = [&](char c) {
    return c == 'a' ? Frame::Lab : (c == 'b' ? Frame::RwaFull : Frame::RwaNaive);
  };
  if (name == "fig1a" || name == "fig1b" || name == "fig2a") {
    s = preset_base(name == "fig1b" ? Frame::RwaFull : Frame::Lab, 1.0);
    set_white(s, {2}, 0.1);
  } else if (name == "fig2b") {
    s = preset_base(Frame::Lab, 1.0);
    set_white(s, {0, 1, 2}, 0.1);
  } else if (name == "fig3a" || name == "fig3b" || name == "fig3c") {
    s = preset_base(frame_abc(name.back()), 1.0);
    set_white(s, {0, 1, 2}, 0.1);
  } else if (name == "fig4a" || name == "fig4b" || name == "fig4c") {
    s = preset_base(frame_abc(name.back()), 1.2);
    set_white(s, {0, 1, 2}, 0.1);
  } else if (name == "fig5a" || name == "fig5b" || name == "fig5c") {
    s = preset_base(frame_abc(name.back()), 1.0);
    set_ou(s, {0}, 0.1, 1.0);
  } else if (name == "fig6a" || name == "fig6b" || name == "fig6c") {
    s = preset_base(frame_abc(name.back()), 1.2);
    set_ou(s, {0, 1, 2}, 0.1, 1.0);
  } else if (name == "det-lab" || name == "det-rwa") {
    s = preset_base(name == "det-lab" ? Frame::Lab : Frame::RwaFull, 1.0);
    s.n_realizations = 1;
  } else {
    throw ConfigError("unknown preset '" + name + "' (see preset-list)");
  }
  s.validate();
  return out;
}

// ---- manifests -------------------------------------------------------------

// fully resolved run description; deliberately excludes anything that does not
// affect the numbers (thread count, timestamps, host)
inline Json scenario_to_json(const LoadedScenario& ls) {
  const Scenario& s = ls.scenario;
  Json j;
  j["frame"] = frame_name(s.frame);
  j["delta"] = s.params.delta;
  j["omega_drive"] = omega_drive;
  j["rabi"] = s.params.rabi;
  j["dt"] = s.grid.dt;
  j["t_final"] = s.grid.t_final;
  j["n_realizations"] = s.n_realizations;
  if (s.noise.any()) j["seed"] = s.seed;
  Json n;
  n["kind"] = noise_kind_name(s.noise.kind);
  if (s.noise.any()) {
    Json axes = Json::array();
    Json w0 = Json::array();
    Json theta = Json::array();
    const char* names[3] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i)
      if (s.noise.axis_active(i)) {
        axes.push_back(names[i]);
        w0.push_back(s.noise.w0[static_cast<size_t>(i)]);
        theta.push_back(s.noise.theta[static_cast<size_t>(i)]);
      }
    n["axes"] = axes;
    n["w0"] = w0;
    if (s.noise.kind == NoiseKind::Ou) n["theta"] = theta;
  }
  j["noise"] = n;
  if (!ls.preset_name.empty()) j["preset"] = ls.preset_name;
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
  f.close();
  if (f.fail()) throw IoError("error while writing " + path);
}

}  // namespace qsl
