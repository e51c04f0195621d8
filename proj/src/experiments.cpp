#include "spinforge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "spinforge/threading.hpp"

namespace spinforge {

using nlohmann::json;

bool ExperimentOutcome::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::logic_error("write_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_g17(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

double final_fraction_average(const std::vector<double>& values,
                              double fraction) {
  if (values.empty())
    throw std::invalid_argument("final_fraction_average: empty input");
  const std::size_t count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * values.size())));
  double sum = 0.0;
  for (std::size_t i = values.size() - count; i < values.size(); ++i)
    sum += values[i];
  return sum / static_cast<double>(count);
}

double aht_residual(int n_per_chain, const CouplingConstants& couplings,
                    SpinConvention convention) {
  ChainTopology topo{n_per_chain};
  const OperatorSum natural =
      build_natural_hamiltonian(topo, couplings, convention);
  // Delta t scales out of the zeroth-order average; any cycle works.
  const PulseCycle cycle = PulseCycle::four_pulse_xy(1.0, 0.0);
  OperatorSum avg = average_hamiltonian_zeroth(natural, cycle);
  avg += build_effective_hamiltonian(topo, couplings, convention).scaled(-1.0);
  double residual = 0.0;
  for (const PauliString& t : avg.simplified().terms)
    residual = std::max(residual, std::abs(t.coefficient));
  return residual;
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

CheckResult make_check(std::string name, bool pass, double value,
                       double threshold) {
  CheckResult c;
  c.name = std::move(name);
  c.pass = pass;
  c.value = value;
  c.threshold = threshold;
  return c;
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const CheckResult& c : checks)
    arr.push_back(json{{"name", c.name},
                       {"pass", c.pass},
                       {"value", c.value},
                       {"threshold", c.threshold}});
  return arr;
}

void write_summary(ExperimentOutcome& out, const ExperimentConfig& c,
                   json body, const std::string& filename) {
  body["experiment"] = c.experiment;
  body["convention"] =
      c.convention == SpinConvention::SpinHalf ? "spin-half" : "pauli";
  body["checks"] = checks_to_json(out.checks);
  body["all_pass"] = out.all_pass();
  const std::string path = join_path(c.output_dir, filename);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << body.dump(2) << "\n";
  out.files.push_back(path);
}

SiteState pure_site_state(InitState s, const char* field) {
  switch (s) {
    case InitState::Ground: return SiteState::Ground;
    case InitState::Excited: return SiteState::Excited;
    case InitState::MaximallyMixed: break;
  }
  throw ConfigError(std::string("config field '") + field +
                    "': maximally-mixed is not supported here");
}

RunOptions run_options(const ExperimentConfig& c) {
  RunOptions opts;
  opts.convention = c.convention;
  opts.method = c.method;
  opts.n_samples = c.n_samples;
  return opts;
}

int cycles_for(const ExperimentConfig& c, double delta_t) {
  if (c.n_cycles > 0) return c.n_cycles;
  const int n = cycles_for_window(c.window_s, delta_t, c.tau_p_s);
  if (n < 1)
    throw ConfigError("config field 'window_ms': shorter than one cycle");
  return n;
}

}  // namespace

ExperimentOutcome run_fig2(const ExperimentConfig& c) {
  ExperimentOutcome out;
  std::filesystem::create_directories(c.output_dir);
  ChainTopology topo{c.n_per_chain};
  const StateVector psi0 =
      chain_initial_state(topo, pure_site_state(c.carbon_init, "initial.carbon"),
                          pure_site_state(c.bath_init, "initial.bath"));
  const RunOptions opts = run_options(c);

  struct DtRun {
    double dt;
    int n_cycles;
    double wall;
    double max_dev;
  };
  std::vector<DtRun> runs;
  json per_dt = json::array();

  for (double dt : c.delta_t_s) {
    const int n = cycles_for(c, dt);
    const PulseCycle cycle = PulseCycle::four_pulse_xy(dt, c.tau_p_s);
    const Trajectory pulsed =
        run_pulsed(topo, c.couplings, cycle, psi0, n, opts);
    RunOptions eff_opts = opts;
    eff_opts.n_samples = n + 1;
    const Trajectory effective =
        run_effective(topo, c.couplings, psi0, cycle.free_time() * n, eff_opts);

    double max_dev = 0.0;
    std::vector<std::vector<double>> rows;
    rows.reserve(pulsed.times.size());
    for (std::size_t k = 0; k < pulsed.times.size(); ++k) {
      max_dev = std::max(max_dev,
                         std::abs(pulsed.mz[k] - effective.mz[k]));
      rows.push_back({pulsed.times[k], effective.mz[k], pulsed.mz[k]});
    }
    const std::string csv =
        join_path(c.output_dir, "fig2_dt_" + short_number(dt * 1e6) + "us.csv");
    write_csv(csv, {"time_s", "mz_effective", "mz_pulsed"}, rows);
    out.files.push_back(csv);

    const double wall = cycle.wall_time() * n;
    runs.push_back({dt, n, wall, max_dev});
    per_dt.push_back(json{{"delta_t_us", dt * 1e6},
                          {"n_cycles", n},
                          {"tau_c_us", cycle.wall_time() * 1e6},
                          {"wall_time_ms", wall * 1e3},
                          {"max_abs_deviation", max_dev}});
    if (c.n_cycles == 0) {
      const double rel = std::abs(wall - c.window_s) / c.window_s;
      out.checks.push_back(make_check(
          "wall_window_dt_" + short_number(dt * 1e6) + "us",
          rel <= 0.01, rel, 0.01));
    }
  }

  // reference curve of the averaged Hamiltonian over the full window
  // (effective-time axis)
  const Trajectory reference =
      run_effective(topo, c.couplings, psi0, c.window_s, opts);
  std::vector<std::vector<double>> ref_rows;
  for (std::size_t k = 0; k < reference.times.size(); ++k)
    ref_rows.push_back({reference.times[k], reference.mz[k]});
  const std::string ref_csv = join_path(c.output_dir, "fig2_effective.csv");
  write_csv(ref_csv, {"time_s", "mz"}, ref_rows);
  out.files.push_back(ref_csv);

  if (runs.size() >= 2) {
    std::vector<DtRun> by_dt = runs;
    std::sort(by_dt.begin(), by_dt.end(),
              [](const DtRun& a, const DtRun& b) { return a.dt > b.dt; });
    double worst_rise = -1e300;
    for (std::size_t i = 1; i < by_dt.size(); ++i)
      worst_rise = std::max(worst_rise,
                            by_dt[i].max_dev - by_dt[i - 1].max_dev);
    out.checks.push_back(make_check("deviation_strictly_decreasing",
                                    worst_rise < 0.0, worst_rise, 0.0));
    out.checks.push_back(make_check("deviation_at_smallest_dt",
                                    by_dt.back().max_dev < 0.05,
                                    by_dt.back().max_dev, 0.05));
  }

  json body;
  body["per_delta_t"] = per_dt;
  body["total_hydrogens"] = 2 * c.n_per_chain;
  write_summary(out, c, std::move(body), "fig2_summary.json");
  return out;
}

ExperimentOutcome run_fig3(const ExperimentConfig& c) {
  ExperimentOutcome out;
  std::filesystem::create_directories(c.output_dir);
  std::vector<int> sizes = c.sizes_n_per_chain;
  if (sizes.empty()) sizes.push_back(c.n_per_chain);

  RunOptions opts = run_options(c);
  opts.track_eof = true;

  json per_size = json::array();
  std::vector<double> final20;
  for (int n_pc : sizes) {
    ChainTopology topo{n_pc};
    const StateVector psi0 = chain_initial_state(
        topo, pure_site_state(c.carbon_init, "initial.carbon"),
        pure_site_state(c.bath_init, "initial.bath"));
    const Trajectory t =
        run_effective(topo, c.couplings, psi0, c.window_s, opts);

    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < t.times.size(); ++k)
      rows.push_back({t.times[k], t.mz[k], t.eof[k]});
    const std::string csv = join_path(
        c.output_dir, "fig3_h" + std::to_string(2 * n_pc) + ".csv");
    write_csv(csv, {"time_s", "mz", "eof"}, rows);
    out.files.push_back(csv);

    const double f20 = final_fraction_average(t.mz, 0.2);
    final20.push_back(f20);
    const double peak = *std::max_element(t.eof.begin(), t.eof.end());
    const double eof_f20 = final_fraction_average(t.eof, 0.2);
    per_size.push_back(json{{"total_hydrogens", 2 * n_pc},
                            {"final20_mz", f20},
                            {"eof_peak", peak},
                            {"final20_eof", eof_f20}});
    if (2 * n_pc >= 10) {
      const std::string tag = "_h" + std::to_string(2 * n_pc);
      out.checks.push_back(
          make_check("eof_peak" + tag, peak > 0.3, peak, 0.3));
      out.checks.push_back(make_check("eof_decay" + tag,
                                      eof_f20 <= 0.5 * peak,
                                      peak > 0.0 ? eof_f20 / peak : 0.0,
                                      0.5));
    }
  }

  if (final20.size() >= 2) {
    int inversions = 0;
    double worst = 0.0;
    for (std::size_t i = 1; i < final20.size(); ++i) {
      const double drop = final20[i - 1] - final20[i];
      if (drop > 0.0) {
        ++inversions;
        worst = std::max(worst, drop);
      }
    }
    const bool pass = inversions == 0 || (inversions == 1 && worst < 0.02);
    out.checks.push_back(
        make_check("final20_monotone_in_size", pass, worst, 0.02));
  }

  json body;
  body["per_size"] = per_size;
  write_summary(out, c, std::move(body), "fig3_summary.json");
  return out;
}

ExperimentOutcome run_fig4(const ExperimentConfig& c) {
  ExperimentOutcome out;
  std::filesystem::create_directories(c.output_dir);
  ChainTopology topo{c.n_per_chain};
  const int n_bath = topo.n_sites() - 1;
  const Index bath_mask = (Index{1} << n_bath) - 1;

  std::vector<Index> bath_patterns;
  if (c.bath_init == InitState::MaximallyMixed) {
    std::mt19937_64 rng(c.seed);
    for (int m = 0; m < c.ensemble_members; ++m)
      bath_patterns.push_back(rng() & bath_mask);
  } else {
    bath_patterns.push_back(c.bath_init == InitState::Excited ? bath_mask : 0);
  }
  std::vector<SiteState> carbon_branches;
  if (c.carbon_init == InitState::MaximallyMixed) {
    carbon_branches = {SiteState::Ground, SiteState::Excited};
  } else {
    carbon_branches = {c.carbon_init == InitState::Excited
                           ? SiteState::Excited
                           : SiteState::Ground};
  }

  const RunOptions opts = run_options(c);
  std::vector<double> times;
  std::vector<double> mean;
  int members = 0;
  for (const Index bath : bath_patterns)
    for (const SiteState carbon : carbon_branches) {
      const StateVector psi0 = chain_initial_state_bits(topo, carbon, bath);
      const Trajectory t =
          run_effective(topo, c.couplings, psi0, c.window_s, opts);
      if (members == 0) {
        times = t.times;
        mean = t.mz;
      } else {
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += t.mz[k];
      }
      ++members;
    }
  for (double& v : mean) v /= members;

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < times.size(); ++k)
    rows.push_back({times[k], mean[k]});
  const std::string csv = join_path(c.output_dir, "fig4_mz.csv");
  write_csv(csv, {"time_s", "mz"}, rows);
  out.files.push_back(csv);

  const double f20 = final_fraction_average(mean, 0.2);
  const bool inverted_bath = c.bath_init == InitState::Excited &&
                             c.carbon_init == InitState::Ground;
  if (inverted_bath)
    out.checks.push_back(make_check("final20_near_inverted_bath",
                                    std::abs(f20 - (-1.0)) <= 0.15,
                                    std::abs(f20 - (-1.0)), 0.15));
  if (c.bath_init == InitState::MaximallyMixed)
    out.checks.push_back(make_check("ensemble_final20_abs",
                                    std::abs(f20) <= 0.55, std::abs(f20),
                                    0.55));

  json body;
  body["total_hydrogens"] = 2 * c.n_per_chain;
  body["members"] = members;
  body["seed"] = c.seed;
  body["final20_mz"] = f20;
  write_summary(out, c, std::move(body), "fig4_summary.json");
  return out;
}

ExperimentOutcome run_machine_experiment(const ExperimentConfig& c) {
  ExperimentOutcome out;
  std::filesystem::create_directories(c.output_dir);
  const OperatorSum h1 =
      build_zeeman(ZeemanParams{c.omega1_rad_s}, c.convention);
  const double gap = zeeman_gap(h1);
  json per_unitary = json::array();

  if (!c.machine_simulated) {
    const DensityMatrix rho1 =
        thermal_state(h1, InverseTemperature{c.beta_per_joule});
    for (MachineUnitary u : c.machine_unitaries) {
      const std::string name = machine_unitary_name(u);
      const MachineRecord rec = work_and_heat(rho1, machine_unitary(u), h1);
      const double closed =
          closed_form_work(gap, c.beta_per_joule, rec.xi);
      const double mismatch = std::abs(rec.work - closed) / gap;
      out.checks.push_back(make_check("work_closed_form_" + name,
                                      mismatch <= 1e-12, mismatch, 1e-12));
      if (rec.efficiency.has_value() && rec.xi > 0.0)
        out.checks.push_back(make_check(
            "efficiency_unity_" + name,
            std::abs(*rec.efficiency - 1.0) <= 1e-12,
            std::abs(*rec.efficiency - 1.0), 1e-12));
      json entry{{"unitary", name},
                 {"xi", rec.xi},
                 {"work_J", rec.work},
                 {"heat_J", rec.heat},
                 {"work_over_gap", rec.work / gap}};
      entry["efficiency"] =
          rec.efficiency ? json(*rec.efficiency) : json(nullptr);
      per_unitary.push_back(std::move(entry));
    }
  } else {
    std::map<std::string, double> drops;
    for (MachineUnitary u : c.machine_unitaries) {
      const std::string name = machine_unitary_name(u);
      MachineConfig mc;
      mc.beta = InverseTemperature{c.beta_per_joule};
      mc.zeeman = ZeemanParams{c.omega1_rad_s};
      mc.unitary = u;
      mc.convention = c.convention;
      mc.simulated = true;
      mc.topo = ChainTopology{c.n_per_chain};
      mc.couplings = c.couplings;
      mc.delta_t = c.delta_t_s.front();
      mc.tau_p = c.tau_p_s;
      mc.stroke_window = c.window_s;
      mc.method = c.method;
      const MachineResult r = run_machine(mc);

      const Trajectory& t = r.excited_population;
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < t.times.size(); ++k)
        rows.push_back({t.times[k], t.mz[k]});
      const std::string csv =
          join_path(c.output_dir, "machine_" + name + ".csv");
      write_csv(csv, {"time_s", "p_excited"}, rows);
      out.files.push_back(csv);

      const double drop =
          t.mz[r.unitary_sample] - t.mz[r.unitary_sample + 1];
      drops[name] = drop;
      per_unitary.push_back(
          json{{"unitary", name},
               {"xi", r.record.xi},
               {"p_excited_drop", drop},
               {"heat_thermalization_J", r.ledger.heat_thermalization},
               {"work_unitary_J", r.ledger.work_unitary},
               {"heat_rethermalization_J", r.ledger.heat_rethermalization},
               {"work_unitary_over_gap", r.ledger.work_unitary / gap}});
    }
    if (drops.count("UI"))
      out.checks.push_back(make_check("drop_UI_small",
                                      std::abs(drops["UI"]) <= 0.02,
                                      std::abs(drops["UI"]), 0.02));
    if (drops.count("Upi") && drops.count("Ux") && drops["Ux"] != 0.0) {
      const double ratio = drops["Upi"] / drops["Ux"];
      out.checks.push_back(make_check("drop_ratio_pi_over_x",
                                      std::abs(ratio - 2.0) <= 0.5, ratio,
                                      2.0));
    }
  }

  json body;
  body["beta_per_joule"] = c.beta_per_joule;
  body["omega1_rad_s"] = c.omega1_rad_s;
  body["gap_J"] = gap;
  body["simulated"] = c.machine_simulated;
  body["per_unitary"] = per_unitary;
  write_summary(out, c, std::move(body), "machine_summary.json");
  return out;
}

ExperimentOutcome run_tomography_experiment(const ExperimentConfig& c) {
  ExperimentOutcome out;
  std::filesystem::create_directories(c.output_dir);
  ChainTopology topo{c.n_per_chain};
  const double dt = c.delta_t_s.front();
  const int n_cycles = cycles_for(c, dt);
  const SiteState bath =
      pure_site_state(c.bath_init, "initial.bath");

  const Channel channel = engineered_relaxation_channel(
      topo, c.couplings, dt, c.tau_p_s, n_cycles, bath, c.convention,
      c.method);
  const ProcessMatrix chi = reconstruct_chi(channel);

  // ideal endpoint: complete relaxation into the bath's pure state
  Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd k2 = Eigen::Matrix2cd::Zero();
  if (bath == SiteState::Ground) {
    k1(0, 0) = 1.0;  // |0><0|
    k2(0, 1) = 1.0;  // |0><1|
  } else {
    k1(1, 1) = 1.0;  // |1><1|
    k2(1, 0) = 1.0;  // |1><0|
  }
  const ProcessMatrix ideal = chi_from_kraus({k1, k2});

  const double fid = process_fidelity(chi, ideal);
  const double self = process_fidelity(chi, chi);
  const double comp = completeness_residual(chi.chi, process_basis());
  out.checks.push_back(
      make_check("fidelity_vs_complete_relaxation", fid > 0.98, fid, 0.98));
  out.checks.push_back(
      make_check("completeness_residual", comp <= 1e-8, comp, 1e-8));
  out.checks.push_back(make_check("self_fidelity_unity",
                                  std::abs(self - 1.0) <= 1e-10,
                                  std::abs(self - 1.0), 1e-10));

  auto chi_to_json = [](const Eigen::Matrix4cd& m) {
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int col = 0; col < 4; ++col)
        row.push_back(json::array({m(r, col).real(), m(r, col).imag()}));
      rows.push_back(std::move(row));
    }
    return rows;
  };

  json body;
  body["total_hydrogens"] = 2 * c.n_per_chain;
  body["n_cycles"] = n_cycles;
  body["bath"] = bath == SiteState::Ground ? "ground" : "excited";
  body["chi"] = chi_to_json(chi.chi);
  body["chi_ideal"] = chi_to_json(ideal.chi);
  body["fidelity_vs_ideal"] = fid;
  write_summary(out, c, std::move(body), "tomography_summary.json");
  return out;
}

ExperimentOutcome run_experiment(const ExperimentConfig& c) {
  c.validate();
  if (c.experiment == "fig2") return run_fig2(c);
  if (c.experiment == "fig3") return run_fig3(c);
  if (c.experiment == "fig4") return run_fig4(c);
  if (c.experiment == "machine") return run_machine_experiment(c);
  if (c.experiment == "tomography") return run_tomography_experiment(c);
  throw ConfigError("config field 'experiment': unknown experiment '" +
                    c.experiment + "'");
}

}  // namespace spinforge
