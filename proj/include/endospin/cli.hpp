#pragma once

// Command-line front end. dispatch() returns the process exit code:
// 0 success, 1 usage error, 2 physics or validation error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "endospin/pulseprog.hpp"
#include "endospin/version.hpp"

namespace endospin::cli {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string sig(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// Rounds to a fixed number of significant digits so JSON output is stable.
inline double round_sig(double x, int digits = 10) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  return std::stod(sig(x, digits));
}

inline json envelope(const std::string& command, const std::vector<std::string>& args, const SystemParams* p,
                     json payload) {
  json j;
  j["schema"] = "endospin." + command + "/" + std::to_string(kSchemaVersion);
  j["version"] = kVersion;
  j["command"] = args;
  if (p) j["params"] = params_to_json(*p);
  j["payload"] = std::move(payload);
  return j;
}

inline void csv_preamble(std::ostream& out, const std::vector<std::string>& args, const SystemParams& p) {
  out << "# endospin " << kVersion << "\n# command:";
  for (const auto& a : args) out << ' ' << a;
  out << "\n# params: " << params_to_json(p).dump() << "\n";
}

/// Physical-parameter flags shared by every subcommand that needs a model.
struct ParamFlags {
  std::string params_path;
  double g1 = 0, g2 = 0, d = 0, j = 0, j0 = 0, theta = 0, phi = 0, e = 0, rabi = 0, linewidth = 0;
  std::vector<std::pair<CLI::Option*, std::string>> options;
  CLI::Option* path_opt = nullptr;

  void attach(CLI::App* app) {
    path_opt = app->add_option("--params", params_path, "JSON parameter file (else $ENDOSPIN_PARAMS)");
    options = {
        {app->add_option("--g1", g1, "fullerene g-factor"), "g1"},
        {app->add_option("--g2", g2, "Fe8 g-factor"), "g2"},
        {app->add_option("--d", d, "axial anisotropy D [K]"), "d_kelvin"},
        {app->add_option("--j", j, "effective coupling J [K]"), "j_eff_kelvin"},
        {app->add_option("--j0", j0, "bare dipolar strength J0 [K]"), "j0_kelvin"},
        {app->add_option("--theta", theta, "dipolar polar angle [rad]"), "theta_rad"},
        {app->add_option("--phi", phi, "dipolar azimuth [rad]"), "phi_rad"},
        {app->add_option("--e-transverse", e, "transverse anisotropy E [K]"), "e_transverse_kelvin"},
        {app->add_option("--rabi", rabi, "Rabi frequency [rad/s]"), "rabi_rad_per_s"},
        {app->add_option("--linewidth", linewidth, "line broadening [MHz]"), "linewidth_mhz"},
    };
  }

  /// Flag > config file > default.
  SystemParams resolve() const {
    json merged = json::object();
    std::string path = params_path;
    if (path.empty()) {
      if (const char* env = std::getenv("ENDOSPIN_PARAMS"); env && *env) path = env;
    }
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw PhysicsError(Errc::config, "cannot open parameter file " + path);
      try {
        in >> merged;
      } catch (const json::exception& ex) {
        throw PhysicsError(Errc::config, std::string("malformed parameter file: ") + ex.what());
      }
      if (!merged.is_object()) throw PhysicsError(Errc::config, "parameter file must hold a JSON object");
    }
    const double values[] = {g1, g2, d, j, j0, theta, phi, e, rabi, linewidth};
    bool coupling_geometry_flag = false;
    bool j_flag = false;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].first->count() == 0) continue;
      merged[options[i].second] = values[i];
      if (options[i].second == "j0_kelvin" || options[i].second == "theta_rad") coupling_geometry_flag = true;
      if (options[i].second == "j_eff_kelvin") j_flag = true;
    }
    // A new J0 or theta on the command line re-derives J unless J is also given.
    if (coupling_geometry_flag && !j_flag && merged.contains("j0_kelvin")) merged.erase("j_eff_kelvin");
    return params_from_json(merged);
  }
};

inline Convention parse_convention(const std::string& s) {
  if (s == "paper") return Convention::paper;
  if (s == "si" || s == "strict_si") return Convention::strict_si;
  throw UsageError("convention must be paper or si");
}

inline PulseMode parse_mode(const std::string& s) {
  if (s == "ideal") return PulseMode::ideal;
  if (s == "detuned") return PulseMode::detuned;
  throw UsageError("mode must be ideal or detuned");
}

inline QuantumState parse_state_spec(const std::string& spec) {
  try {
    const auto prog = pulse::parse("init " + spec);
    return pulse::initial_state(prog);
  } catch (const pulse::ParseError& e) {
    throw UsageError("bad state '" + spec + "': " + e.diagnostic().message);
  }
}

inline json crossing_json(const CrossingPoint& cp) {
  return {{"state_a", cp.state_a.str()},
          {"state_b", cp.state_b.str()},
          {"bz_star_T", round_sig(cp.bz_star)},
          {"omega_star_K", round_sig(cp.omega_star)},
          {"gap_K", round_sig(cp.gap)},
          {"order", to_string(cp.order)},
          {"negative_field", cp.negative_field}};
}

inline json populations_json(const QuantumState& s, double floor = 1e-12) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const double pop = s.population(i);
    if (pop > floor) arr.push_back({{"state", product_label(i).str()}, {"population", round_sig(pop)}});
  }
  return arr;
}

inline json readout_json(const Readout& r) {
  return {{"plus", round_sig(r.plus)},
          {"minus", round_sig(r.minus)},
          {"unresolved", round_sig(r.unresolved)},
          {"bit0", round_sig(r.bit0)},
          {"bit1", round_sig(r.bit1)}};
}

inline json budget_json(const Budget& b, Convention c) {
  return {{"convention", to_string(c)},
          {"pulse_time_ns", round_sig(b.pulse_time * 1e9)},
          {"decoherence_time_ns", round_sig(b.decoherence_time * 1e9)},
          {"t0_max_ns", round_sig(b.t0_max * 1e9)},
          {"feasible", b.feasible},
          {"ok", b.ok}};
}

inline json report_json(const ProtocolReport& r, ReadoutMapping mapping) {
  json gates = json::array();
  for (const auto& g : r.gates) {
    json jg{{"name", g.name}, {"duration_s", round_sig(g.duration)}, {"bz_from_T", round_sig(g.bz_from)},
            {"bz_to_T", round_sig(g.bz_to)}};
    if (g.flip_probability) jg["flip_probability"] = round_sig(*g.flip_probability);
    if (g.column) jg["column"] = *g.column;
    gates.push_back(std::move(jg));
  }
  return {{"fidelity", round_sig(r.fidelity)},
          {"population_fidelity", round_sig(r.population_fidelity)},
          {"total_duration_s", round_sig(r.total_duration)},
          {"gate_sum_duration_s", round_sig(r.gate_sum_duration)},
          {"t0_s", round_sig(r.t0)},
          {"budget", budget_json(r.budget, Convention::paper)},
          {"budget_ok", r.budget_ok},
          {"gates", gates},
          {"readout", readout_json(readout_map(r.final_state, mapping))},
          {"final_populations", populations_json(r.final_state)},
          {"ideal_populations", populations_json(r.ideal_state)},
          {"warnings", r.warnings}};
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"endospin: fullerene spin readout through an Fe8 nanomagnet", "endospin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  bool as_json = false;

  // convert
  auto* convert = app.add_subcommand("convert", "convert between K, MHz, T, mT, s, ns");
  double value = 0.0, g_factor = 2.0;
  std::string from_unit, to_unit;
  convert->add_option("--value", value, "value to convert")->required();
  convert->add_option("--from", from_unit, "source unit")->required();
  convert->add_option("--to", to_unit, "target unit")->required();
  convert->add_option("--g", g_factor, "g-factor for field <-> energy")->capture_default_str();
  convert->add_flag("--json", as_json, "JSON output");

  // levels
  auto* levels = app.add_subcommand("levels", "energy levels versus Bz as CSV");
  ParamFlags levels_params;
  levels_params.attach(levels);
  double bz_from = 0.0, bz_to = 0.05;
  int points = 101;
  std::string model_name = "diagonal", states_name = "low", energy_unit = "K";
  bool transverse = false;
  levels->add_option("--bz-from", bz_from, "start field [T]")->required();
  levels->add_option("--bz-to", bz_to, "end field [T]")->required();
  levels->add_option("--points", points, "number of field points")->required()->check(CLI::Range(2, 1000000));
  levels->add_option("--model", model_name, "diagonal or full")->check(CLI::IsMember({"diagonal", "full"}));
  levels->add_option("--states", states_name, "low (8 ground-doublet states) or all")->check(CLI::IsMember({"low", "all"}));
  levels->add_option("--unit", energy_unit, "K, MHz or GHz")->check(CLI::IsMember({"K", "MHz", "GHz"}));
  levels->add_flag("--transverse", transverse, "include the transverse anisotropy (full model)");
  levels->add_flag("--json", as_json, "JSON output");

  // crossings
  auto* crossings = app.add_subcommand("crossings", "level crossings among the ground-doublet states");
  ParamFlags crossings_params;
  crossings_params.attach(crossings);
  bool all_pairs = false, refine = false;
  crossings->add_option("--bz-from", bz_from, "start field [T]")->required();
  crossings->add_option("--bz-to", bz_to, "end field [T]")->required();
  crossings->add_flag("--all-pairs", all_pairs, "include different-n (higher-order) pairs");
  crossings->add_flag("--refine", refine, "compute full-model avoided gaps for first-order pairs");
  crossings->add_flag("--json", as_json, "versioned JSON envelope");

  // transitions
  auto* transitions = app.add_subcommand("transitions", "degenerate transition frequencies -w + mJ");
  ParamFlags transitions_params;
  transitions_params.attach(transitions);
  double bz = 0.0;
  transitions->add_option("--bz", bz, "field [T]")->required();
  transitions->add_flag("--json", as_json, "JSON output");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "all 84 eigenvalues at one field");
  ParamFlags spectrum_params;
  spectrum_params.attach(spectrum);
  spectrum->add_option("--bz", bz, "field [T]")->required();
  spectrum->add_option("--model", model_name, "diagonal or full")->check(CLI::IsMember({"diagonal", "full"}));
  spectrum->add_flag("--transverse", transverse, "include the transverse anisotropy (full model)");
  spectrum->add_flag("--json", as_json, "JSON output");

  // run
  auto* run = app.add_subcommand("run", "execute a .pulse program");
  ParamFlags run_params;
  run_params.attach(run);
  std::string program_path, out_path, convention_name = "paper";
  double delta = 0.0;
  run->add_option("program", program_path, "program file")->required();
  run->add_option("--out", out_path, "write the JSON result here");
  auto* run_delta = run->add_option("--delta", delta, "tunnel splitting for sweeps without gap= [K]");
  run->add_option("--model", model_name, "hold propagation model")->check(CLI::IsMember({"diagonal", "full"}));
  run->add_option("--convention", convention_name, "timing-budget convention (paper|si)");
  int plus_bit = 0;
  run->add_option("--plus-bit", plus_bit, "logical bit read when Fe8 ends in m > 0")->check(CLI::IsMember({0, 1}));
  run->add_flag("--json", as_json, "JSON output (always on)");

  // protocol
  auto* protocol = app.add_subcommand("protocol", "SWAP or CNOT12-only transfer");
  ParamFlags protocol_params;
  protocol_params.attach(protocol);
  std::string action, encoding_name = "outer", init_spec = "|3/2,-10>", mode_name = "ideal";
  double rate = 1e-6, pdelta = 1e-7;
  int control_m = 10;
  protocol->add_option("action", action, "swap or convert")->required()->check(CLI::IsMember({"swap", "convert"}));
  protocol->add_option("--encoding", encoding_name, "inner or outer")->check(CLI::IsMember({"inner", "outer"}));
  protocol->add_option("--init", init_spec, "initial state, e.g. '|3/2,-10>'");
  protocol->add_option("--mode", mode_name, "ideal or detuned");
  protocol->add_option("--rate", rate, "sweep rate [T/s]");
  protocol->add_option("--delta", pdelta, "tunnel splitting [K]");
  protocol->add_option("--control-m", control_m, "Fe8 control column (+10 or -10)");
  protocol->add_option("--convention", convention_name, "timing-budget convention (paper|si)");
  protocol->add_flag("--json", as_json, "JSON output (always on)");

  // budget
  auto* budget = app.add_subcommand("budget", "decoherence timing budget");
  double rabi_value = 0.0, linewidth_value = 0.0, t0_ns = 0.0;
  budget->add_option("--rabi", rabi_value, "Rabi frequency [MHz-labelled]")->required();
  budget->add_option("--linewidth", linewidth_value, "line broadening [MHz-labelled]")->required();
  budget->add_option("--t0", t0_ns, "tunnelling time [ns]")->required();
  budget->add_option("--convention", convention_name, "paper or si");
  budget->add_flag("--json", as_json, "JSON output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  std::vector<std::string> echo{"endospin"};
  echo.insert(echo.end(), args.begin(), args.end());

  try {
    if (*convert) {
      const auto from = units::parse_unit(from_unit);
      const auto to = units::parse_unit(to_unit);
      if (!from) throw UsageError("unknown unit '" + from_unit + "'");
      if (!to) throw UsageError("unknown unit '" + to_unit + "'");
      const auto q = units::convert({value, *from}, *to, g_factor);
      std::vector<std::string> notes;
      if (units::dimension_of(*from) == units::Dimension::energy && *from != *to) {
        notes.push_back("exact CODATA 2018 k_B/h = 20836.61912 MHz/K; e.g. 0.0175 K = 364.6 MHz, often rounded to 350 MHz");
      }
      if (as_json) {
        out << envelope("convert", echo, nullptr,
                        {{"value", round_sig(q.value, 6)}, {"unit", units::symbol(*to)}, {"notes", notes}})
                   .dump(2)
            << "\n";
      } else {
        out << sig(q.value, 6) << " " << units::symbol(*to) << "\n";
      }
      return 0;
    }

    if (*levels) {
      const SystemParams p = levels_params.resolve();
      if (!(bz_from <= bz_to)) throw UsageError("--bz-from must not exceed --bz-to");
      const double scale = energy_unit == "K" ? 1.0 : energy_unit == "MHz" ? units::kBoltzmannOverPlanckMHz
                                                                            : units::kBoltzmannOverPlanckMHz * 1e-3;
      const auto low = low_lying_states();
      auto is_low = [&](const StateLabel& s) { return std::find(low.begin(), low.end(), s) != low.end(); };
      json rows = json::array();
      std::ostringstream csv;
      csv << "bz,state_label,energy_" << energy_unit << "\n";
      for (int i = 0; i < points; ++i) {
        const double b = bz_from + (bz_to - bz_from) * i / (points - 1);
        std::vector<std::pair<StateLabel, double>> row;
        if (model_name == "diagonal") {
          for (Eigen::Index k = 0; k < kProductDim; ++k) {
            const StateLabel s = product_label(k);
            if (states_name == "low" && !is_low(s)) continue;
            row.emplace_back(s, energy_diag(s, p, b));
          }
        } else {
          for (const auto& lvl : full_spectrum(p, b, transverse)) {
            if (states_name == "low" && !is_low(lvl.state)) continue;
            row.emplace_back(lvl.state, lvl.energy);
          }
        }
        for (const auto& [s, e] : row) {
          csv << sig(b) << "," << s.str() << "," << sig(e * scale) << "\n";
          rows.push_back({{"bz_T", round_sig(b)}, {"state", s.str()}, {"energy", round_sig(e * scale)}});
        }
      }
      if (as_json) {
        out << envelope("levels", echo, &p, {{"unit", energy_unit}, {"model", model_name}, {"rows", rows}}).dump(2)
            << "\n";
      } else {
        csv_preamble(out, echo, p);
        out << csv.str();
      }
      return 0;
    }

    if (*crossings) {
      const SystemParams p = crossings_params.resolve();
      if (!(bz_from <= bz_to)) throw UsageError("--bz-from must not exceed --bz-to");
      json arr = json::array();
      for (auto cp : enumerate_crossings(p, bz_from, bz_to, low_lying_states(), !all_pairs)) {
        if (refine && cp.order == CrossingOrder::first_order) cp.gap = avoided_gap(cp.state_a, cp.state_b, p);
        arr.push_back(crossing_json(cp));
      }
      out << (as_json ? envelope("crossings", echo, &p, arr) : arr).dump(2) << "\n";
      return 0;
    }

    if (*transitions) {
      const SystemParams p = transitions_params.resolve();
      const double w = p.omega1(bz);
      json rows = json::array();
      std::ostringstream csv;
      csv << "m,freq_K,freq_MHz\n";
      for (int m = 10; m >= -10; --m) {
        const double f = transition_freq(HalfInt(m), w, p.j_eff);
        csv << m << "," << sig(f) << "," << sig(units::kelvin_to_mhz(f)) << "\n";
        rows.push_back({{"m", m}, {"freq_K", round_sig(f)}, {"freq_MHz", round_sig(units::kelvin_to_mhz(f))}});
      }
      if (as_json) {
        out << envelope("transitions", echo, &p, {{"bz_T", round_sig(bz)}, {"rows", rows}}).dump(2) << "\n";
      } else {
        csv_preamble(out, echo, p);
        out << csv.str();
      }
      return 0;
    }

    if (*spectrum) {
      const SystemParams p = spectrum_params.resolve();
      std::vector<EnergyLevel> lv;
      if (model_name == "full") {
        lv = full_spectrum(p, bz, transverse);
      } else {
        for (Eigen::Index k = 0; k < kProductDim; ++k) lv.push_back({product_label(k), energy_diag(product_label(k), p, bz), bz, 1.0});
        std::stable_sort(lv.begin(), lv.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
      }
      json rows = json::array();
      std::ostringstream csv;
      csv << "index,state_label,weight,energy_K\n";
      for (std::size_t i = 0; i < lv.size(); ++i) {
        csv << i << "," << lv[i].state.str() << "," << sig(lv[i].weight, 6) << "," << sig(lv[i].energy) << "\n";
        rows.push_back({{"index", i}, {"state", lv[i].state.str()}, {"weight", round_sig(lv[i].weight, 6)},
                        {"energy_K", round_sig(lv[i].energy)}});
      }
      if (as_json) {
        out << envelope("spectrum", echo, &p, {{"bz_T", round_sig(bz)}, {"model", model_name}, {"levels", rows}}).dump(2)
            << "\n";
      } else {
        csv_preamble(out, echo, p);
        out << csv.str();
      }
      return 0;
    }

    if (*run) {
      const SystemParams p = run_params.resolve();
      const Convention conv = parse_convention(convention_name);
      std::ifstream in(program_path, std::ios::binary);
      if (!in) throw UsageError("cannot open program " + program_path);
      std::stringstream buf;
      buf << in.rdbuf();
      pulse::PulseProgram prog;
      try {
        prog = pulse::parse(buf.str());
      } catch (const pulse::ParseError& e) {
        err << program_path << ":" << e.what() << "\n";
        return 2;
      }
      const auto lints = pulse::validate(prog, p, conv);
      for (const auto& l : lints) err << "warning: line " << l.line << ": " << l.message << "\n";
      pulse::RunOptions opts;
      opts.hold_model = model_name == "full" ? Model::full : Model::diagonal;
      if (run_delta->count()) opts.default_gap = delta;
      opts.readout.plus_is_zero = plus_bit == 0;
      const auto rr = pulse::execute(prog, p, opts);

      json lint_arr = json::array();
      for (const auto& l : lints) lint_arr.push_back({{"code", to_string(l.code)}, {"line", l.line}, {"message", l.message}});
      json segs = json::array();
      for (std::size_t i = 0; i < rr.evolution.segments.size(); ++i) {
        segs.push_back({{"line", prog.lines[i]},
                        {"kind", rr.evolution.segments[i].kind},
                        {"duration_s", round_sig(rr.evolution.segments[i].duration)}});
      }
      json meas = json::array();
      for (const auto& m : rr.measurements) {
        meas.push_back({{"line", m.line}, {"time_s", round_sig(m.time)}, {"bz_T", round_sig(m.bz)},
                        {"readout", readout_json(m.readout)}});
      }
      const json payload{{"program", pulse::serialize(prog)},
                         {"lints", lint_arr},
                         {"notes", rr.notes},
                         {"elapsed_s", round_sig(rr.evolution.elapsed)},
                         {"final_bz_T", round_sig(rr.final_bz)},
                         {"segments", segs},
                         {"measurements", meas},
                         {"final_populations", populations_json(rr.evolution.final_state)}};
      const std::string text = envelope("run", echo, &p, payload).dump(2) + "\n";
      if (!out_path.empty()) {
        std::ofstream o(out_path, std::ios::binary);
        if (!o) throw UsageError("cannot write " + out_path);
        o << text;
      } else {
        out << text;
      }
      return 0;
    }

    if (*protocol) {
      const SystemParams p = protocol_params.resolve();
      const QubitEncoding enc{encoding_name == "inner" ? Encoding::inner : Encoding::outer};
      ProtocolControls c;
      c.mode = parse_mode(mode_name);
      c.control_m = control_m;
      c.rate = rate;
      c.delta = pdelta;
      c.convention = parse_convention(convention_name);
      const QuantumState input = parse_state_spec(init_spec);
      ProtocolReport r;
      ReadoutMapping mapping;
      if (action == "swap") {
        r = swap(enc, input, p, c);
        mapping = swap_readout_mapping(control_m);
      } else {
        r = convert_only(enc, input, p, c);
        const Readout start = readout_map(input);
        mapping = convert_readout_mapping(start.plus > start.minus ? 10 : -10);
      }
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      json payload = report_json(r, mapping);
      payload["budget"] = budget_json(r.budget, c.convention);
      payload["action"] = action;
      payload["encoding"] = to_string(enc.kind);
      payload["mode"] = to_string(c.mode);
      out << envelope("protocol", echo, &p, payload).dump(2) << "\n";
      return 0;
    }

    if (*budget) {
      const Convention conv = parse_convention(convention_name);
      const Budget b = timing_budget(rabi_value, linewidth_value, t0_ns * 1e-9, conv);
      if (as_json) {
        out << envelope("budget", echo, nullptr, budget_json(b, conv)).dump(2) << "\n";
      } else {
        out << "convention: " << to_string(conv) << "\n"
            << "pulse_time_ns: " << sig(b.pulse_time * 1e9, 6) << "\n"
            << "decoherence_time_ns: " << sig(b.decoherence_time * 1e9, 6) << "\n"
            << "t0_max_ns: " << sig(b.t0_max * 1e9, 6) << "\n"
            << "feasible: " << (b.feasible ? "true" : "false") << "\n"
            << "ok: " << (b.ok ? "true" : "false") << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const PhysicsError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const pulse::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

inline int dispatch(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace endospin::cli
