#include "squeeze/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "squeeze/cli_io.hpp"
#include "squeeze/error.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/presets.hpp"
#include "squeeze/sa_probe.hpp"
#include "squeeze/spectral.hpp"

#ifndef SQUEEZE_LAB_VERSION
#define SQUEEZE_LAB_VERSION "0.0.0"
#endif

namespace squeeze {

namespace {

struct Params {
  int n = 1;
  std::size_t dim = 1000;
  int kerr_order = 2;
  double kerr = 0.0;
  double r_max = 2.0;
  double dr = 0.01;
  std::string method = "auto";
  std::string out;
  std::size_t jobs = 0;
  bool full = false;
  double depth = 1e6;
  std::vector<std::size_t> dims;
  std::vector<double> strengths;
  double j_min = FitWindow{}.j_min;
  double j_max = FitWindow{}.j_max;
  std::string figure;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// Flat key = value config: appends --key value for every key not already
// given on the command line, so flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (!path) return args;
  std::ifstream f(*path);
  if (!f) throw CLI::ValidationError("--config", "cannot open config file " + *path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", *path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (key == "full") {
      if (value == "true" || value == "1") args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

std::optional<KerrSpec> kerr_from(const Params& p, const CLI::App& sub) {
  if (sub.count("--kerr") == 0) return std::nullopt;
  return KerrSpec{p.kerr_order, p.kerr};
}

std::size_t depth_from(double d) {
  if (!(d >= 1.0) || d != std::floor(d) || d > 1e9) {
    throw InvalidArgument("--depth must be a whole number between 1 and 1e9");
  }
  return static_cast<std::size_t>(d);
}

std::filesystem::path manifest_for(const std::filesystem::path& out) {
  auto m = out;
  m.replace_extension(".manifest.json");
  return m;
}

RunManifest begin_manifest(const std::string& command, const CLI::App& sub) {
  RunManifest m;
  m.command = command;
  m.tool_version = SQUEEZE_LAB_VERSION;
  m.started = utc_timestamp();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
    std::string value;
    for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    if (opt->count() == 0) value = opt->get_default_str();
    m.parameters[opt->get_lnames().front()] = value;
  }
  return m;
}

ExperimentOptions experiment_options(const Params& p) {
  ExperimentOptions o;
  o.r_max = p.r_max;
  o.dr = p.dr;
  o.method = parse_method(p.method);
  o.jobs = p.jobs;
  return o;
}

void add_model(CLI::App* sub, Params& p) {
  sub->add_option("--n", p.n, "photons created per group")->check(CLI::Range(1, 64));
  sub->add_option("--dim", p.dim, "truncation dimension N")->check(CLI::PositiveNumber);
  sub->add_option("--kerr-order", p.kerr_order, "Kerr order h (2 or 4)")->check(CLI::IsMember({2, 4}));
  sub->add_option("--kerr", p.kerr, "Kerr strength (K, or K_4 for order 4)")->check(CLI::NonNegativeNumber);
}

void add_dynamics(CLI::App* sub, Params& p) {
  sub->add_option("--r-max", p.r_max, "final squeezing parameter")->check(CLI::PositiveNumber);
  sub->add_option("--dr", p.dr, "grid step")->check(CLI::PositiveNumber);
  sub->add_option("--method", p.method, "spectral, chebyshev, powering or auto");
}

void add_common(CLI::App* sub, Params& p) {
  sub->add_option("--out", p.out, "output file (relative to the output root)");
  sub->add_option("--jobs", p.jobs, "worker threads (0 = all cores)");
  sub->add_flag("--full", p.full, "larger truncations (10N parity, longer dimension ladders)");
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"squeeze_lab: generalized n-photon squeezing in truncated Fock spaces", "squeeze_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SQUEEZE_LAB_VERSION);
  Params p;

  auto* prop = app.add_subcommand("propagate", "photon number of the evolved vacuum");
  add_model(prop, p);
  add_dynamics(prop, p);
  add_common(prop, p);

  auto* spec = app.add_subcommand("spectrum", "eigenvalues of one truncated Hamiltonian");
  add_model(spec, p);
  add_common(spec, p);

  auto* fit = app.add_subcommand("fit", "power-law fits at dims N and N+1 plus the interleaved fit");
  add_model(fit, p);
  add_common(fit, p);
  fit->add_option("--j-min", p.j_min, "fit window start (level index)");
  fit->add_option("--j-max", p.j_max, "fit window end (level index)");

  auto* parity = app.add_subcommand("parity", "dynamics at N, N+1, sN, sN+1 (s = 4, or 10 with --full)");
  add_model(parity, p);
  add_dynamics(parity, p);
  add_common(parity, p);

  auto* sweep = app.add_subcommand("sweep", "Kerr-strength sweep with regulation verdicts");
  add_model(sweep, p);
  add_dynamics(sweep, p);
  add_common(sweep, p);
  sweep->add_option("--dims", p.dims, "truncation dims")->delimiter(',');
  sweep->add_option("--strengths", p.strengths, "Kerr strengths, increasing")->delimiter(',')->required();

  auto* probe = app.add_subcommand("probe-sa", "limit point / limit circle test of the infinite operator");
  add_model(probe, p);
  add_common(probe, p);
  probe->add_option("--depth", p.depth, "recursion depth (e.g. 1e6)");
  probe->add_option("--strengths", p.strengths, "scan these Kerr strengths (n = 2h)")->delimiter(',');

  auto* preset = app.add_subcommand("preset", "reproduce one figure's runs");
  preset->add_option("figure", p.figure, "fig1 .. fig9")->required();
  add_dynamics(preset, p);
  add_common(preset, p);

  try {
    auto args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    OutputWriter writer(output_root());
    if (prop->parsed()) {
      const TruncationSpec ts{p.n, p.dim, kerr_from(p, *prop)};
      PropagationConfig cfg;
      cfg.r_max = p.r_max;
      cfg.dr = p.dr;
      cfg.method = parse_method(p.method);
      ts.validate();
      cfg.validate();
      auto manifest = begin_manifest("propagate", *prop);
      const auto traj = propagate_vacuum(build_hamiltonian(ts), ts, cfg);
      const std::string target = p.out.empty() ? "trajectory.csv" : p.out;
      const auto path = writer.write(target, trajectory_csv(traj));
      write_manifest(manifest, writer, manifest_for(target));
      out << "wrote " << path.string() << " (" << traj.size() << " points, method "
          << to_string(traj.method_used) << ", max photon " << traj.max_photon() << ")\n";
    } else if (spec->parsed()) {
      const TruncationSpec ts{p.n, p.dim, kerr_from(p, *spec)};
      ts.validate();
      auto manifest = begin_manifest("spectrum", *spec);
      const auto s = spectrum(build_hamiltonian(ts));
      const std::string target = p.out.empty() ? "spectrum.csv" : p.out;
      const auto path = writer.write(target, spectrum_csv(s));
      write_manifest(manifest, writer, manifest_for(target));
      out << "wrote " << path.string() << "\n"
          << "symmetry_defect " << symmetry_defect(s) << "\n"
          << "zero_modes " << count_zero_modes(s) << "\n";
      try {
        out << "smallest_positive " << smallest_positive(s) << "\n";
      } catch (const Error&) {
        out << "smallest_positive none\n";
      }
    } else if (fit->parsed()) {
      const auto kerr = kerr_from(p, *fit);
      const TruncationSpec a{p.n, p.dim, kerr};
      const TruncationSpec b{p.n, p.dim + 1, kerr};
      a.validate();
      auto manifest = begin_manifest("fit", *fit);
      const FitWindow w{p.j_min, p.j_max};
      const auto sa = spectrum(build_hamiltonian(a));
      const auto sb = spectrum(build_hamiltonian(b));
      const auto fa = fit_power_law(sa, w);
      const auto fb = fit_power_law(sb, w);
      const auto fi = interleaved_fit(sa, sb, w);
      const nlohmann::json data = {{"n", p.n},
                                   {"dims", {p.dim, p.dim + 1}},
                                   {"window", {w.j_min, w.j_max}},
                                   {"fits", {to_json(fa), to_json(fb)}},
                                   {"interleaved", to_json(fi)}};
      const std::string target = p.out.empty() ? "fit.json" : p.out;
      const auto path = writer.write(target, report_json("power_law_fit", data));
      write_manifest(manifest, writer, manifest_for(target));
      out << "gamma N=" << p.dim << " " << fa.gamma << "\n"
          << "gamma N=" << p.dim + 1 << " " << fb.gamma << "\n"
          << "gamma interleaved " << fi.gamma << "\n"
          << "wrote " << path.string() << "\n";
    } else if (parity->parsed()) {
      auto manifest = begin_manifest("parity", *parity);
      const auto rep = parity_experiment(p.n, p.dim, kerr_from(p, *parity), experiment_options(p),
                                         p.full ? 10 : 4);
      const std::string target = p.out.empty() ? "parity.json" : p.out;
      const auto path = writer.write(target, report_json("parity", to_json(rep)));
      write_manifest(manifest, writer, manifest_for(target));
      for (std::size_t i = 0; i < 4; ++i) {
        out << "max_photon N=" << rep.dims[i] << " " << rep.max_photon[i] << "\n";
      }
      out << "even_even " << rep.even_even.distance << "\n"
          << "odd_odd " << rep.odd_odd.distance << "\n"
          << "even_odd " << rep.even_odd.distance << "\n"
          << "wrote " << path.string() << "\n";
    } else if (sweep->parsed()) {
      auto manifest = begin_manifest("sweep", *sweep);
      const std::vector<std::size_t> dims =
          p.dims.empty() ? std::vector<std::size_t>{1000, 1001} : p.dims;
      const auto rep = kerr_sweep(p.n, p.kerr_order, p.strengths, dims, experiment_options(p));
      nlohmann::json data = to_json(rep);
      for (const auto& pt : rep.points) {
        out << "K=" << pt.strength << " " << (pt.regulated ? "regulated" : "unregulated") << "\n";
      }
      try {
        const auto t = threshold_detect(rep);
        data["threshold"] = to_json(t);
        out << "threshold " << t.midpoint << " (bracket " << t.unregulated << ", " << t.regulated
            << "; dominance estimate " << t.analytic << ")\n";
      } catch (const Error& e) {
        data["threshold"] = nullptr;
        out << e.what() << "\n";
      }
      const std::string target = p.out.empty() ? "sweep.json" : p.out;
      const auto path = writer.write(target, report_json("kerr_sweep", data));
      write_manifest(manifest, writer, manifest_for(target));
      out << "wrote " << path.string() << "\n";
    } else if (probe->parsed()) {
      auto manifest = begin_manifest("probe-sa", *probe);
      const std::size_t depth = depth_from(p.depth);
      nlohmann::json data;
      std::string kind;
      if (!p.strengths.empty()) {
        const auto scan = critical_scan(p.n, p.kerr_order, p.strengths, depth);
        for (std::size_t i = 0; i < scan.results.size(); ++i) {
          out << "K=" << scan.strengths[i] << " " << describe(scan.results[i].verdict) << "\n";
        }
        if (scan.flip) out << "flip in (" << scan.flip->first << ", " << scan.flip->second << ")\n";
        data = to_json(scan);
        kind = "critical_scan";
      } else {
        const auto c = classify({p.n, 1, kerr_from(p, *probe)}, depth);
        out << describe(c.verdict) << "\n";
        out << "decay_exponent " << c.decay_exponent << "\n";
        if (!c.diagnostic.empty()) out << "diagnostic " << c.diagnostic << "\n";
        data = to_json(c);
        kind = "sa_classification";
      }
      if (!p.out.empty()) {
        const auto path = writer.write(p.out, report_json(kind, data));
        write_manifest(manifest, writer, manifest_for(p.out));
        out << "wrote " << path.string() << "\n";
      }
    } else if (preset->parsed()) {
      auto manifest = begin_manifest("preset", *preset);
      Preset plan = make_preset(p.figure, p.full);
      plan.r_max = p.r_max;
      plan.dr = p.dr;
      execute_preset(plan, writer, p.jobs, parse_method(p.method));
      write_manifest(manifest, writer, plan.id + "/manifest.json");
      out << "preset " << plan.id << ": " << plan.runs.size() << " runs, "
          << writer.records().size() << " files under " << writer.resolve(plan.id).string() << "\n";
    }
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace squeeze
