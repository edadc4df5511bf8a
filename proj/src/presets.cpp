#include "squeeze/presets.hpp"

#include <algorithm>
#include <cstdio>

#include "squeeze/error.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/spectral.hpp"

namespace squeeze {

std::string_view to_string(RunKind k) {
  switch (k) {
    case RunKind::trajectory: return "trajectory";
    case RunKind::spectrum: return "spectrum";
    case RunKind::fit: return "fit";
    case RunKind::scaling: return "scaling";
    case RunKind::extrapolation: return "extrapolation";
    case RunKind::low_levels: return "low_levels";
  }
  return "trajectory";
}

std::size_t Preset::count(RunKind k) const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [k](const PlannedRun& r) { return r.kind == k; }));
}

std::vector<std::string> preset_ids() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

namespace {

std::string strength_tag(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

std::string curve_name(int n, std::size_t dim, const std::optional<KerrSpec>& kerr) {
  std::string name = "n" + std::to_string(n) + "_N" + std::to_string(dim);
  if (kerr) name += "_h" + std::to_string(kerr->order) + "_K" + strength_tag(kerr->strength);
  return name + ".csv";
}

void add_curves(Preset& p, int n, const std::vector<std::size_t>& dims,
                const std::optional<KerrSpec>& kerr) {
  for (std::size_t d : dims) {
    p.runs.push_back({RunKind::trajectory, n, {d}, kerr, "trajectory_" + curve_name(n, d, kerr)});
  }
}

void add_kerr_grid(Preset& p, int n, int order, const std::vector<double>& strengths,
                   const std::vector<std::size_t>& dims) {
  for (double k : strengths) add_curves(p, n, dims, KerrSpec{order, k});
}

std::vector<std::size_t> even_range(std::size_t step, std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t d = step; d <= last; d += step) out.push_back(d);
  return out;
}

}  // namespace

Preset make_preset(std::string_view id, bool full) {
  Preset p;
  p.id = std::string(id);
  p.full = full;
  const std::size_t big = full ? 10000 : 4000;
  const std::vector<std::size_t> four{1000, 1001, big, big + 1};

  if (id == "fig1") {
    for (int n = 3; n <= 6; ++n) add_curves(p, n, four, std::nullopt);
  } else if (id == "fig2") {
    for (int n = 1; n <= 4; ++n) {
      for (std::size_t d : {std::size_t{1000}, std::size_t{1001}}) {
        p.runs.push_back({RunKind::spectrum, n, {d}, std::nullopt,
                          "spectrum_n" + std::to_string(n) + "_N" + std::to_string(d) + ".csv"});
      }
    }
    for (int n = 1; n <= 4; ++n) {
      p.runs.push_back({RunKind::fit, n, {1000, 1001}, std::nullopt,
                        "fit_n" + std::to_string(n) + ".json"});
    }
  } else if (id == "fig3") {
    add_kerr_grid(p, 3, 2, {1e-3, 1e-2, 1e-1, 1.0}, four);
  } else if (id == "fig4") {
    add_kerr_grid(p, 3, 4, {1e-8, 1e-7, 1e-6, 1e-5}, four);
    add_kerr_grid(p, 4, 4, {1e-7, 1e-6, 1e-5, 1e-4}, four);
  } else if (id == "fig5") {
    add_kerr_grid(p, 4, 2, {1.0, 1.5, 2.0, 2.5}, four);
  } else if (id == "fig6") {
    std::vector<double> k2, k4a, k4b, kc;
    for (int i = 2; i <= 9; ++i) {
      k2.push_back(0.1 * i);
      k4a.push_back(1e-6 * i);
      k4b.push_back(1e-5 * i);
      kc.push_back(2.0 + 0.1 * i);
    }
    add_kerr_grid(p, 3, 2, k2, {1000});
    add_kerr_grid(p, 3, 4, k4a, {1000});
    add_kerr_grid(p, 4, 4, k4b, {1000});
    add_kerr_grid(p, 4, 2, kc, {1000});
  } else if (id == "fig7" || id == "fig8" || id == "fig9") {
    RunKind kind = RunKind::extrapolation;
    std::vector<std::size_t> dims;
    std::string stem = "smallest";
    if (id == "fig7") {
      dims = full ? even_range(500, 10000) : even_range(200, 2000);
    } else if (id == "fig8") {
      kind = RunKind::scaling;
      stem = "large";
      dims = full ? std::vector<std::size_t>{200, 400, 800, 1600, 3200, 6400, 12800}
                  : std::vector<std::size_t>{200, 400, 800, 1600, 3200};
    } else {
      kind = RunKind::low_levels;
      stem = "lowest_ten";
      dims = full ? even_range(500, 10000) : even_range(200, 2000);
    }
    for (int n = 1; n <= 4; ++n) {
      p.runs.push_back({kind, n, dims, std::nullopt, stem + "_n" + std::to_string(n) + ".csv"});
    }
  } else {
    throw InvalidArgument("unknown preset '" + std::string(id) + "' (expected fig1..fig9)");
  }
  return p;
}

namespace {

std::string json_name(const std::string& csv) {
  return csv.substr(0, csv.size() - 4) + ".json";
}

void run_one(const Preset& p, const PlannedRun& run, OutputWriter& writer, Method method) {
  const std::string dir = p.id + "/";
  switch (run.kind) {
    case RunKind::trajectory: {
      const TruncationSpec spec{run.n, run.dims.front(), run.kerr};
      PropagationConfig cfg;
      cfg.r_max = p.r_max;
      cfg.dr = p.dr;
      cfg.method = method;
      writer.write(dir + run.output, trajectory_csv(propagate_vacuum(build_hamiltonian(spec), spec, cfg)));
      return;
    }
    case RunKind::spectrum: {
      const TruncationSpec spec{run.n, run.dims.front(), run.kerr};
      writer.write(dir + run.output, spectrum_csv(spectrum(build_hamiltonian(spec))));
      return;
    }
    case RunKind::fit: {
      const auto a = spectrum(build_hamiltonian({run.n, run.dims[0], run.kerr}));
      const auto b = spectrum(build_hamiltonian({run.n, run.dims[1], run.kerr}));
      const FitWindow w;
      const nlohmann::json data = {
          {"n", run.n},
          {"dims", run.dims},
          {"window", {w.j_min, w.j_max}},
          {"fits", {to_json(fit_power_law(a, w)), to_json(fit_power_law(b, w))}},
          {"interleaved", to_json(interleaved_fit(a, b, w))}};
      writer.write(dir + run.output, report_json("power_law_fit", data));
      return;
    }
    case RunKind::scaling: {
      const auto rep = largest_eigenvalue_scaling(run.n, run.dims);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < rep.dims.size(); ++i) {
        rows.push_back({static_cast<double>(rep.dims[i]), rep.largest[i], rep.three_quarter[i],
                        rep.eleven_twentieth[i]});
      }
      writer.write(dir + run.output,
                   table_csv({"dim", "largest", "three_quarter", "eleven_twentieth"}, rows));
      writer.write(dir + json_name(run.output), report_json("eigenvalue_scaling", to_json(rep)));
      return;
    }
    case RunKind::extrapolation: {
      const auto ex = extrapolate_smallest(run.n, run.dims);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < ex.dims.size(); ++i) {
        rows.push_back({static_cast<double>(ex.dims[i]), ex.smallest[i]});
      }
      writer.write(dir + run.output, table_csv({"dim", "smallest_positive"}, rows));
      writer.write(dir + json_name(run.output), report_json("extrapolation", to_json(ex)));
      return;
    }
    case RunKind::low_levels: {
      std::vector<std::string> header{"dim"};
      for (int k = 1; k <= 10; ++k) header.push_back("level_" + std::to_string(k));
      std::vector<std::vector<double>> rows;
      for (std::size_t d : run.dims) {
        const auto levels = positive_levels(spectrum(build_hamiltonian({run.n, d, run.kerr})));
        if (levels.energy.size() < 10) throw Error("fewer than ten positive levels at dim " + std::to_string(d));
        std::vector<double> row{static_cast<double>(d)};
        row.insert(row.end(), levels.energy.begin(), levels.energy.begin() + 10);
        rows.push_back(std::move(row));
      }
      writer.write(dir + run.output, table_csv(header, rows));
      return;
    }
  }
}

}  // namespace

void execute_preset(const Preset& p, OutputWriter& writer, std::size_t jobs, Method method) {
  parallel_for(p.runs.size(), jobs, [&](std::size_t i) {
    try {
      run_one(p, p.runs[i], writer, method);
    } catch (const std::exception& e) {
      throw Error(p.id + " " + p.runs[i].output + ": " + e.what());
    }
  });
}

}  // namespace squeeze
