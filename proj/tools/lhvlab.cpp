// lhvlab: command-line laboratory for hidden-variable polarization models.
//
// Subcommands
//   deconvolve  recover a transfer profile from a generalized Malus target
//   chain       transmission of a polarizer chain under several models
//   chsh        coincidence Monte Carlo and the four-term combination
//   packet      free two-body wavepacket trajectory dump
//   osc         oscillator operator residuals and phase trajectory
//
// Every command is deterministic given its flags and seed; rerunning writes
// byte-identical files.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lhv/epr.hpp"
#include "lhv/errors.hpp"
#include "lhv/io.hpp"
#include "lhv/oscillator.hpp"
#include "lhv/polarizer.hpp"
#include "lhv/twobody.hpp"

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lhv::io_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw lhv::io_error("write failed for " + path.string());
}

json read_json_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lhv::io_error("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw lhv::io_error(path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw lhv::io_error("spec is missing numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

lhv::twobody::Vec3 require_vec3(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
    throw lhv::io_error("spec field '" + key + "' must be a 3-component array");
  }
  return {j[key][0].get<double>(), j[key][1].get<double>(), j[key][2].get<double>()};
}

// ---------------------------------------------------------------------------

struct DeconvolveArgs {
  double epsilon = 0.01;
  std::size_t grid = 256;
  double tolerance = 1e-6;
  int max_iterations = 10000;
  std::string out;
};

int run_deconvolve(const DeconvolveArgs& args) {
  const lhv::angular::AngularGrid grid(args.grid);
  const auto target = lhv::polarizer::MalusTarget::generalized(grid, args.epsilon);
  const auto result = lhv::polarizer::solve_profile(
      target, {.tolerance = args.tolerance, .max_iterations = args.max_iterations});

  lhv::io::write_profile_csv(result.profile, args.out + ".csv");
  write_json(args.out + ".json",
             json{{"box_feasible", result.report.box_feasible},
                  {"box_residual_best", result.report.box_residual_best},
                  {"epsilon", args.epsilon},
                  {"grid_n", args.grid},
                  {"iterations", result.report.iterations},
                  {"provenance", "deconvolve generalized-malus"},
                  {"residual_max", result.report.residual_max},
                  {"tolerance", args.tolerance}});
  std::cout << "profile written to " << args.out << ".csv (residual "
            << lhv::io::format_double(result.report.residual_max) << ", box "
            << (result.report.box_feasible ? "feasible" : "infeasible") << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ChainArgs {
  std::string profile;
  std::vector<double> angles_deg;
  std::vector<std::string> modes{"fixed", "collapse", "mueller"};
  double epsilon = 0.0;
  std::string out;
  std::string format = "json";
};

int run_chain(const ChainArgs& args) {
  if (args.angles_deg.empty()) throw lhv::parameter_error("at least one axis angle is needed");
  const auto profile = lhv::io::load_profile_csv(args.profile);
  std::vector<double> angles(args.angles_deg.size());
  for (std::size_t i = 0; i < angles.size(); ++i) angles[i] = deg_to_rad(args.angles_deg[i]);

  json values;
  for (const auto& mode : args.modes) {
    if (mode == "fixed") {
      values["fixed"] = lhv::polarizer::chain_transmission(
          profile, angles, lhv::polarizer::ChainModel::kFixedPolarization);
    } else if (mode == "collapse") {
      values["collapse"] = lhv::polarizer::chain_transmission(
          profile, angles, lhv::polarizer::ChainModel::kCollapse);
    } else if (mode == "mueller") {
      values["mueller"] =
          lhv::polarizer::mueller_chain(lhv::polarizer::StokesVector::unpolarized(1.0), angles,
                                        args.epsilon)
              .intensity_fraction;
    } else {
      throw lhv::parameter_error("unknown chain mode '" + mode +
                                 "' (expected fixed, collapse or mueller)");
    }
  }

  json differences;
  const std::vector<std::string> order{"fixed", "collapse", "mueller"};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (values.contains(order[i]) && values.contains(order[j])) {
        differences[order[i] + "_minus_" + order[j]] =
            values[order[i]].get<double>() - values[order[j]].get<double>();
      }
    }
  }

  if (args.format == "csv") {
    std::vector<std::string> header;
    std::vector<double> row;
    for (const auto& [key, value] : values.items()) {
      header.push_back(key);
      row.push_back(value.get<double>());
    }
    for (const auto& [key, value] : differences.items()) {
      header.push_back(key);
      row.push_back(value.get<double>());
    }
    lhv::io::write_csv(args.out + ".csv", header, {row});
  } else {
    write_json(args.out + ".json", json{{"angles_deg", args.angles_deg},
                                        {"differences", differences},
                                        {"epsilon", args.epsilon},
                                        {"profile", args.profile},
                                        {"values", values}});
  }
  std::cout << "chain report written to " << args.out << "." << args.format << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ChshArgs {
  std::string profile;
  std::vector<double> settings_deg{45.0, 0.0, 22.5, 67.5};
  std::uint64_t events = 1000000;
  std::uint64_t seed = lhv::epr::kDefaultSeed;
  int scan_steps = 0;
  std::string out;
  std::string format = "json";
};

json counts_to_json(const lhv::epr::CoincidenceCounts& c) {
  return json{{"absorb_pass", c.absorb_pass}, {"alpha_rad", c.alpha},
              {"beta_rad", c.beta},           {"both_absorb", c.both_absorb},
              {"both_pass", c.both_pass},     {"events", c.events},
              {"pass_absorb", c.pass_absorb}};
}

int run_chsh(const ChshArgs& args) {
  if (args.events == 0) throw lhv::parameter_error("event count must be positive");
  if (args.settings_deg.size() != 4) {
    throw lhv::parameter_error("settings need four angles: alpha,alpha',beta,beta'");
  }
  const auto profile = lhv::io::load_profile_csv(args.profile);
  const lhv::epr::PairSource source{.seed = args.seed};

  if (args.scan_steps > 0) {
    // one-parameter family (0, 2t; t, 3t); the canonical quadruple sits at
    // t = pi/8
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= args.scan_steps; ++i) {
      const double t = 0.5 * kPi * static_cast<double>(i) / args.scan_steps;
      const lhv::epr::ChshSettings s{2.0 * t, 0.0, t, 3.0 * t};
      const auto run = lhv::epr::run_chsh(source, profile, s, args.events);
      rows.push_back({t, run.score.correlations[0].value, run.score.correlations[1].value,
                      run.score.correlations[2].value, run.score.correlations[3].value,
                      run.score.s, run.score.standard_error, lhv::epr::quantum_chsh(s)});
    }
    lhv::io::write_csv(args.out + ".csv",
                       {"t_rad", "e1", "e2", "e3", "e4", "s", "s_se", "s_quantum"}, rows);
    std::cout << "scan written to " << args.out << ".csv\n";
    return 0;
  }

  const lhv::epr::ChshSettings settings{
      deg_to_rad(args.settings_deg[0]), deg_to_rad(args.settings_deg[1]),
      deg_to_rad(args.settings_deg[2]), deg_to_rad(args.settings_deg[3])};
  const auto run = lhv::epr::run_chsh(source, profile, settings, args.events);
  const double s_quantum = lhv::epr::quantum_chsh(settings);

  if (args.format == "csv") {
    std::vector<double> row{args.settings_deg[0], args.settings_deg[1], args.settings_deg[2],
                            args.settings_deg[3]};
    for (const auto& c : run.score.correlations) {
      row.push_back(c.value);
      row.push_back(c.standard_error);
    }
    row.push_back(run.score.s);
    row.push_back(run.score.standard_error);
    row.push_back(s_quantum);
    lhv::io::write_csv(args.out + ".csv",
                       {"alpha_deg", "alpha_prime_deg", "beta_deg", "beta_prime_deg", "e1",
                        "se1", "e2", "se2", "e3", "se3", "e4", "se4", "s", "s_se", "s_quantum"},
                       {row});
  } else {
    json correlations = json::array();
    json counts = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
      correlations.push_back(json{{"standard_error", run.score.correlations[i].standard_error},
                                  {"value", run.score.correlations[i].value}});
      counts.push_back(counts_to_json(run.counts[i]));
    }
    write_json(args.out + ".json",
               json{{"correlations", correlations},
                    {"counts", counts},
                    {"events_per_setting", args.events},
                    {"s_quantum", s_quantum},
                    {"s_standard_error", run.score.standard_error},
                    {"s_value", run.score.s},
                    {"seed", args.seed},
                    {"settings_deg",
                     json{{"alpha", args.settings_deg[0]},
                          {"alpha_prime", args.settings_deg[1]},
                          {"beta", args.settings_deg[2]},
                          {"beta_prime", args.settings_deg[3]}}}});
  }
  std::cout << "coincidence report written to " << args.out << "." << args.format << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct PacketArgs {
  std::string spec;
  double tmin = -5.0;
  double tmax = 5.0;
  int steps = 100;
  std::string out;
};

int run_packet(const PacketArgs& args) {
  if (args.steps < 1) throw lhv::parameter_error("trajectory needs at least one step");
  if (args.tmax < args.tmin) throw lhv::parameter_error("epoch range is reversed");
  const json spec = read_json_spec(args.spec);
  const lhv::twobody::GaussianPacket base(
      require_number(spec, "mass"), require_vec3(spec, "center"),
      spec.contains("epoch_init") ? require_number(spec, "epoch_init") : 0.0,
      require_vec3(spec, "k_mean"), require_number(spec, "sigma_k"));
  if (base.k_mean.norm() <= 0.0) {
    throw lhv::parameter_error("trajectory spec needs a nonzero mean wave vector");
  }

  std::vector<std::vector<double>> rows;
  auto packet = lhv::twobody::GaussianPacket(base.mass, base.center_init, base.epoch_init,
                                             base.k_mean, base.sigma_k, args.tmin);
  const double dt = (args.tmax - args.tmin) / args.steps;
  for (int i = 0; i <= args.steps; ++i) {
    if (i > 0) packet = lhv::twobody::evolve(packet, dt);
    const auto q = lhv::twobody::expect_q(packet);
    const auto p = lhv::twobody::expect_p(packet);
    rows.push_back({packet.epoch, q[0], q[1], q[2], p[0], p[1], p[2],
                    lhv::twobody::expect_H(packet), lhv::twobody::expect_Q(packet),
                    lhv::twobody::expect_R(packet), lhv::twobody::expect_T(packet),
                    lhv::twobody::impact_parameter(packet)});
  }
  lhv::io::write_csv(args.out + ".csv",
                     {"tau", "qx", "qy", "qz", "px", "py", "pz", "H", "Q", "R", "T", "b"},
                     rows);
  std::cout << "trajectory written to " << args.out << ".csv\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct OscArgs {
  double mass = 1.0;
  double spring = 1.0;
  int dim = 128;
  double nbar = 10.0;
  double tmin = 0.0;
  double tmax = 12.566370614359172;  // two periods at omega = 1
  int steps = 64;
  std::string out;
};

int run_osc(const OscArgs& args) {
  if (args.steps < 1) throw lhv::parameter_error("trajectory needs at least one step");
  if (args.tmax < args.tmin || args.tmin < 0.0) {
    throw lhv::parameter_error("time range must be forward and nonnegative");
  }
  const auto ops = lhv::oscillator::build_operators(args.mass, args.spring, args.dim);
  const auto residuals = lhv::oscillator::commutator_residuals(ops);
  lhv::io::write_csv(
      args.out + "_residuals.csv",
      {"dim", "buffer", "omega", "hs_interior", "hc_interior", "hs_full", "hc_full"},
      {{static_cast<double>(residuals.dim), static_cast<double>(residuals.buffer), ops.omega,
        residuals.hs_interior, residuals.hc_interior, residuals.hs_full, residuals.hc_full}});

  auto state = lhv::oscillator::coherent_state(ops, args.nbar);
  if (args.tmin > 0.0) state = lhv::oscillator::evolve_osc(state, ops, args.tmin);
  const double dt = (args.tmax - args.tmin) / args.steps;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= args.steps; ++i) {
    if (i > 0) state = lhv::oscillator::evolve_osc(state, ops, dt);
    const double c = lhv::oscillator::expectation(state, ops.c).real();
    const double s = lhv::oscillator::expectation(state, ops.s).real();
    const auto reading = lhv::oscillator::phase(state, ops);
    rows.push_back({args.tmin + i * dt, c, s, reading.angle,
                    static_cast<double>(reading.sheet),
                    lhv::oscillator::time_expectation(state, ops),
                    lhv::oscillator::cs_norm(state, ops)});
  }
  lhv::io::write_csv(args.out + "_phase.csv",
                     {"t", "c_expect", "s_expect", "phase", "sheet", "time_label", "cs_norm"},
                     rows);
  std::cout << "residuals and phase trajectory written to " << args.out << "_*.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for hidden-variable polarization models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read option defaults from an INI file");

  DeconvolveArgs deconvolve_args;
  auto* deconvolve = app.add_subcommand(
      "deconvolve", "recover a transfer profile from a generalized Malus target");
  deconvolve->add_option("--epsilon", deconvolve_args.epsilon, "leakage parameter in [0, 1)");
  deconvolve->add_option("--grid", deconvolve_args.grid, "angular grid size");
  deconvolve->add_option("--tolerance", deconvolve_args.tolerance, "max-norm residual target");
  deconvolve->add_option("--max-iterations", deconvolve_args.max_iterations,
                         "refinement iteration budget");
  deconvolve->add_option("--out", deconvolve_args.out, "output path prefix")->required();

  ChainArgs chain_args;
  auto* chain = app.add_subcommand("chain", "polarizer chain transmission under several models");
  chain->add_option("--profile", chain_args.profile, "transfer profile CSV")->required();
  chain
      ->add_option("--angles", chain_args.angles_deg, "axis angles in degrees (first must be 0)")
      ->required()
      ->delimiter(',');
  chain->add_option("--modes", chain_args.modes, "fixed, collapse, mueller")->delimiter(',');
  chain->add_option("--epsilon", chain_args.epsilon, "polarizer leakage for the Mueller model");
  chain->add_option("--out", chain_args.out, "output path prefix")->required();
  chain->add_option("--format", chain_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  ChshArgs chsh_args;
  auto* chsh = app.add_subcommand("chsh", "coincidence Monte Carlo and four-term combination");
  chsh->add_option("--profile", chsh_args.profile, "transfer profile CSV")->required();
  chsh->add_option("--settings", chsh_args.settings_deg,
                   "alpha,alpha',beta,beta' in degrees (default: canonical)")
      ->delimiter(',');
  chsh->add_option("--events", chsh_args.events, "events per settings pair");
  chsh->add_option("--seed", chsh_args.seed, "root seed");
  chsh->add_option("--scan", chsh_args.scan_steps, "emit a CSV scan with this many steps");
  chsh->add_option("--out", chsh_args.out, "output path prefix")->required();
  chsh->add_option("--format", chsh_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  PacketArgs packet_args;
  auto* packet = app.add_subcommand("packet", "free two-body wavepacket trajectory");
  packet->add_option("--spec", packet_args.spec, "packet spec JSON")->required();
  packet->add_option("--tmin", packet_args.tmin, "first epoch");
  packet->add_option("--tmax", packet_args.tmax, "last epoch");
  packet->add_option("--steps", packet_args.steps, "number of steps");
  packet->add_option("--out", packet_args.out, "output path prefix")->required();

  OscArgs osc_args;
  auto* osc = app.add_subcommand("osc", "oscillator residual report and phase trajectory");
  osc->add_option("--mass", osc_args.mass, "reduced mass");
  osc->add_option("--spring", osc_args.spring, "spring constant");
  osc->add_option("--dim", osc_args.dim, "basis truncation dimension");
  osc->add_option("--nbar", osc_args.nbar, "mean excitation of the probe state");
  osc->add_option("--tmin", osc_args.tmin, "first time");
  osc->add_option("--tmax", osc_args.tmax, "last time");
  osc->add_option("--steps", osc_args.steps, "number of steps");
  osc->add_option("--out", osc_args.out, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (deconvolve->parsed()) return run_deconvolve(deconvolve_args);
    if (chain->parsed()) return run_chain(chain_args);
    if (chsh->parsed()) return run_chsh(chsh_args);
    if (packet->parsed()) return run_packet(packet_args);
    if (osc->parsed()) return run_osc(osc_args);
  } catch (const lhv::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
