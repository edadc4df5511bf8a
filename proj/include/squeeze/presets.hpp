#pragma once

// Per-figure run plans. Desk-scale dims by default; `full` switches to the
// 10^4-sized truncations.
//
//   fig1  parity dynamics, n = 3..6 at N, N+1, sN, sN+1
//   fig2  spectra at 1000/1001 and power-law fits, n = 1..4
//   fig3  n = 3 with quadratic Kerr
//   fig4  quartic Kerr, n = 3 and n = 4
//   fig5  n = 4 with quadratic Kerr around K = 2
//   fig6  fixed-dimension panels over many Kerr strengths
//   fig7  smallest positive eigenvalue against N, with extrapolation
//   fig8  three large eigenvalues against N
//   fig9  ten smallest positive eigenvalues against N

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeeze/cli_io.hpp"
#include "squeeze/operators.hpp"
#include "squeeze/propagate.hpp"

namespace squeeze {

enum class RunKind { trajectory, spectrum, fit, scaling, extrapolation, low_levels };

std::string_view to_string(RunKind k);

struct PlannedRun {
  RunKind kind = RunKind::trajectory;
  int n = 1;
  std::vector<std::size_t> dims;  // one dim, an even/odd pair (fit) or a series
  std::optional<KerrSpec> kerr;
  std::string output;  // relative path of the main output
};

struct Preset {
  std::string id;
  bool full = false;
  double r_max = 2.0;
  double dr = 0.01;
  std::vector<PlannedRun> runs;

  std::size_t count(RunKind k) const;
};

std::vector<std::string> preset_ids();

// Throws InvalidArgument for an unknown id.
Preset make_preset(std::string_view id, bool full = false);

// Runs every planned job on the pool and writes its outputs under
// `<id>/` through the writer.
void execute_preset(const Preset& p, OutputWriter& writer, std::size_t jobs = 0,
                    Method method = Method::automatic);

}  // namespace squeeze
