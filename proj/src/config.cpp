#include "spinforge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace spinforge {

using nlohmann::json;

InitState init_state_from_name(const std::string& name) {
  if (name == "ground") return InitState::Ground;
  if (name == "excited") return InitState::Excited;
  if (name == "maximally-mixed") return InitState::MaximallyMixed;
  throw ConfigError("initial state must be ground, excited or "
                    "maximally-mixed, got '" + name + "'");
}

std::string init_state_name(InitState s) {
  switch (s) {
    case InitState::Ground: return "ground";
    case InitState::Excited: return "excited";
    case InitState::MaximallyMixed: return "maximally-mixed";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown config field '" +
                        (where.empty() ? it.key() : where + "." + it.key()) +
                        "'");
}

double get_number(const json& obj, const std::string& field, double fallback) {
  if (!obj.contains(field)) return fallback;
  const json& v = obj.at(field);
  if (!v.is_number()) fail(field, "must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& field, int fallback) {
  if (!obj.contains(field)) return fallback;
  const json& v = obj.at(field);
  if (!v.is_number_integer()) fail(field, "must be an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& field,
                       const std::string& fallback) {
  if (!obj.contains(field)) return fallback;
  const json& v = obj.at(field);
  if (!v.is_string()) fail(field, "must be a string");
  return v.get<std::string>();
}

SpinConvention parse_convention(const std::string& s) {
  if (s == "spin-half") return SpinConvention::SpinHalf;
  if (s == "pauli") return SpinConvention::Pauli;
  throw ConfigError("config field 'convention': must be spin-half or pauli, "
                    "got '" + s + "'");
}

EvolveMethod parse_method(const std::string& s) {
  if (s == "auto") return EvolveMethod::Auto;
  if (s == "dense") return EvolveMethod::Dense;
  if (s == "krylov") return EvolveMethod::Krylov;
  throw ConfigError("config field 'method': must be auto, dense or krylov, "
                    "got '" + s + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::set<std::string> known{"fig2", "fig3", "fig4", "machine",
                                           "tomography"};
  if (!known.count(experiment))
    fail("experiment", "must be one of fig2, fig3, fig4, machine, tomography");
  if (n_per_chain < 1) fail("topology.n_per_chain", "must be >= 1");
  for (int n : sizes_n_per_chain)
    if (n < 1) fail("topology.sizes_n_per_chain", "entries must be >= 1");
  if (couplings.j_ch <= 0.0) fail("couplings.j_ch_eff_rad_s", "must be > 0");
  if (couplings.j_hh <= 0.0) fail("couplings.j_hh_eff_rad_s", "must be > 0");
  if (delta_t_s.empty()) fail("cycle.delta_t_us", "must not be empty");
  for (double dt : delta_t_s)
    if (!(dt > 0.0)) fail("cycle.delta_t_us", "must be > 0");
  if (tau_p_s < 0.0) fail("cycle.tau_p_us", "must be >= 0");
  if (n_cycles < 0) fail("cycle.n_cycles", "must be >= 0");
  if (!(window_s > 0.0)) fail("window_ms", "must be > 0");
  if (n_samples < 2) fail("n_samples", "must be >= 2");
  if ((carbon_init == InitState::MaximallyMixed ||
       bath_init == InitState::MaximallyMixed) &&
      experiment != "fig4")
    fail("initial", "maximally-mixed states are only run by fig4");
  if (ensemble_members < 1) fail("ensemble_members", "must be >= 1");
  if (!(omega1_rad_s > 0.0)) fail("machine.omega1_rad_s", "must be > 0");
  if (machine_unitaries.empty()) fail("machine.unitary", "must not be empty");
  if (output_dir.empty()) fail("output_dir", "must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*allow comments*/ true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root, "",
                 {"experiment", "convention", "topology", "couplings",
                  "cycle", "window_ms", "n_samples", "initial",
                  "ensemble_members", "machine", "seed", "output_dir",
                  "method"});

  ExperimentConfig c;
  if (!root.contains("experiment")) fail("experiment", "is required");
  c.experiment = get_string(root, "experiment", "");
  c.convention = parse_convention(get_string(root, "convention", "spin-half"));
  c.method = parse_method(get_string(root, "method", "auto"));

  if (root.contains("topology")) {
    const json& t = root.at("topology");
    if (!t.is_object()) fail("topology", "must be an object");
    reject_unknown(t, "topology", {"n_per_chain", "sizes_n_per_chain"});
    c.n_per_chain = get_int(t, "n_per_chain", c.n_per_chain);
    if (t.contains("sizes_n_per_chain")) {
      const json& v = t.at("sizes_n_per_chain");
      if (!v.is_array()) fail("topology.sizes_n_per_chain", "must be an array");
      for (const json& e : v) {
        if (!e.is_number_integer())
          fail("topology.sizes_n_per_chain", "entries must be integers");
        c.sizes_n_per_chain.push_back(e.get<int>());
      }
    }
  }

  if (root.contains("couplings")) {
    const json& v = root.at("couplings");
    if (!v.is_object()) fail("couplings", "must be an object");
    reject_unknown(v, "couplings", {"j_ch_eff_rad_s", "j_hh_eff_rad_s"});
    const double jch = get_number(v, "j_ch_eff_rad_s", c.couplings.j_ch_eff());
    const double jhh = get_number(v, "j_hh_eff_rad_s", c.couplings.j_hh_eff());
    c.couplings = CouplingConstants::from_effective(jch, jhh);
  }

  if (root.contains("cycle")) {
    const json& v = root.at("cycle");
    if (!v.is_object()) fail("cycle", "must be an object");
    reject_unknown(v, "cycle", {"delta_t_us", "tau_p_us", "n_cycles"});
    if (v.contains("delta_t_us")) {
      c.delta_t_s.clear();
      const json& dts = v.at("delta_t_us");
      if (dts.is_array()) {
        for (const json& e : dts) {
          if (!e.is_number()) fail("cycle.delta_t_us", "must be numbers");
          c.delta_t_s.push_back(e.get<double>() * 1e-6);
        }
      } else if (dts.is_number()) {
        c.delta_t_s.push_back(dts.get<double>() * 1e-6);
      } else {
        fail("cycle.delta_t_us", "must be a number or an array of numbers");
      }
    }
    c.tau_p_s = get_number(v, "tau_p_us", c.tau_p_s * 1e6) * 1e-6;
    c.n_cycles = get_int(v, "n_cycles", c.n_cycles);
  }

  c.window_s = get_number(root, "window_ms", c.window_s * 1e3) * 1e-3;
  c.n_samples = get_int(root, "n_samples", c.n_samples);

  if (root.contains("initial")) {
    const json& v = root.at("initial");
    if (!v.is_object()) fail("initial", "must be an object");
    reject_unknown(v, "initial", {"carbon", "bath"});
    c.carbon_init = init_state_from_name(
        get_string(v, "carbon", init_state_name(c.carbon_init)));
    c.bath_init = init_state_from_name(
        get_string(v, "bath", init_state_name(c.bath_init)));
  }
  c.ensemble_members = get_int(root, "ensemble_members", c.ensemble_members);

  if (root.contains("machine")) {
    const json& v = root.at("machine");
    if (!v.is_object()) fail("machine", "must be an object");
    reject_unknown(v, "machine",
                   {"beta_per_joule", "omega1_rad_s", "unitary", "simulated"});
    c.beta_per_joule = get_number(v, "beta_per_joule", c.beta_per_joule);
    c.omega1_rad_s = get_number(v, "omega1_rad_s", c.omega1_rad_s);
    if (v.contains("unitary")) {
      c.machine_unitaries.clear();
      const json& u = v.at("unitary");
      try {
        if (u.is_array()) {
          for (const json& e : u)
            c.machine_unitaries.push_back(
                machine_unitary_from_name(e.get<std::string>()));
        } else if (u.is_string()) {
          c.machine_unitaries.push_back(
              machine_unitary_from_name(u.get<std::string>()));
        } else {
          fail("machine.unitary", "must be a string or an array of strings");
        }
      } catch (const std::invalid_argument& e) {
        fail("machine.unitary", e.what());
      }
    }
    if (v.contains("simulated")) {
      if (!v.at("simulated").is_boolean())
        fail("machine.simulated", "must be a boolean");
      c.machine_simulated = v.at("simulated").get<bool>();
    }
  }

  if (root.contains("seed")) {
    const json& v = root.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      fail("seed", "must be a non-negative integer");
    if (v.is_number_integer() && v.get<long long>() < 0)
      fail("seed", "must be a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  c.output_dir = get_string(root, "output_dir", c.output_dir);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace spinforge
