#include "squeeze/sa_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "squeeze/error.hpp"
#include "squeeze/spectral.hpp"

namespace squeeze {

using cplx = std::complex<double>;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::limit_point: return "limit_point";
    case Verdict::limit_circle: return "limit_circle";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view describe(Verdict v) {
  switch (v) {
    case Verdict::limit_point: return "limit_point (essentially self-adjoint)";
    case Verdict::limit_circle: return "limit_circle (not essentially self-adjoint)";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr double kRescaleHigh = 1e100;
constexpr double kRescaleLow = 1e-100;
constexpr std::size_t kFirstBlock = 4;  // blocks start at j = 16
constexpr std::size_t kTailBlocks = 4;  // ratios used for the verdict

struct Coefficients {
  const TruncationSpec& spec;
  double coupling(std::size_t j) const { return squeezing_coupling(spec.n, j); }
  double diagonal(std::size_t j) const { return kerr_diagonal(spec.photons(j), spec.kerr); }
};

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct Evidence {
  Verdict verdict = Verdict::inconclusive;
  double decay_exponent = 0.0;
  std::vector<std::size_t> tail_indices;
  std::vector<double> log_tail_norms;
  std::vector<double> log_ratios;
};

// Block statistics over psi_0..psi_limit.
Evidence assess(std::span<const LogComplex> psi, std::size_t limit) {
  Evidence ev;
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_blocks;
  std::vector<double> centres;
  std::vector<double> lengths;
  double running = ninf;
  std::size_t j = 0;
  for (std::size_t k = 0;; ++k) {
    const std::size_t lo = k == 0 ? 0 : (std::size_t{1} << k);
    const std::size_t hi = std::size_t{1} << (k + 1);  // exclusive
    if (hi - 1 > limit) break;
    double block = ninf;
    for (j = lo; j < hi; ++j) block = log_add(block, 2.0 * psi[j].log_abs);
    running = log_add(running, block);
    ev.tail_indices.push_back(hi - 1);
    ev.log_tail_norms.push_back(running);
    if (k >= kFirstBlock) {
      log_blocks.push_back(block);
      centres.push_back(0.5 * static_cast<double>(lo + hi - 1));
      lengths.push_back(static_cast<double>(hi - lo));
    }
  }
  for (std::size_t b = 1; b < log_blocks.size(); ++b) {
    ev.log_ratios.push_back(log_blocks[b] - log_blocks[b - 1]);
  }
  if (ev.log_ratios.size() < kTailBlocks) return ev;

  const auto tail = std::span(ev.log_ratios).last(kTailBlocks);
  const double cut = std::log(kBlockRatioThreshold);
  if (std::all_of(tail.begin(), tail.end(), [cut](double r) { return r < cut; })) {
    ev.verdict = Verdict::limit_circle;
  } else if (std::all_of(tail.begin(), tail.end(), [cut](double r) { return r >= cut; })) {
    ev.verdict = Verdict::limit_point;
  }

  // Mean |psi|^2 per block against block centre over the same tail.
  const std::size_t used = kTailBlocks + 1;
  const std::size_t first = log_blocks.size() - used;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t b = first; b < log_blocks.size(); ++b) {
    const double x = std::log(centres[b]);
    const double y = log_blocks[b] - std::log(lengths[b]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(used);
  const double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
  ev.decay_exponent = -0.5 * slope;
  return ev;
}

// Scaled three-term recursion state: the true pair is (prev, cur) * exp(scale).
struct Pair {
  cplx prev;
  cplx cur;
  double scale = 0.0;

  void renormalise() {
    const double m = std::max(std::abs(prev), std::abs(cur));
    if (m > kRescaleHigh || (m < kRescaleLow && m > 0.0)) {
      prev /= m;
      cur /= m;
      scale += std::log(m);
    }
  }
};

// Sine of the angle between the two backward solutions at j = mid.
double backward_independence(const TruncationSpec& spec, cplx z, std::size_t depth,
                             std::size_t mid) {
  const Coefficients co{spec};
  // Pair holds (psi_{j+1}, psi_j) walking downwards.
  Pair a{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
  Pair b{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
  for (std::size_t j = depth; j > mid; --j) {
    const double tj = co.coupling(j);
    const double tjm = co.coupling(j - 1);
    const cplx shift = z - co.diagonal(j);
    for (Pair* p : {&a, &b}) {
      const cplx below = (shift * p->cur - tj * p->prev) / tjm;
      p->prev = p->cur;
      p->cur = below;
      p->renormalise();
    }
  }
  const double na = std::hypot(std::abs(a.prev), std::abs(a.cur));
  const double nb = std::hypot(std::abs(b.prev), std::abs(b.cur));
  const cplx det = a.cur * b.prev - a.prev * b.cur;
  return std::abs(det) / (na * nb);
}

}  // namespace

std::vector<LogComplex> deficiency_solution(const TruncationSpec& spec, cplx z,
                                            std::size_t depth) {
  spec.validate();
  if (z.imag() == 0.0) throw InvalidArgument("deficiency probe needs Im z != 0");
  if (depth < 1) throw InvalidArgument("probe depth must be >= 1");
  const Coefficients co{spec};
  std::vector<LogComplex> out(depth + 1);
  out[0] = {0.0, 0.0};
  double t_prev = 0.0;
  double t_cur = co.coupling(0);
  // Pair holds (psi_{j-1}, psi_j).
  Pair p{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
  for (std::size_t j = 0; j < depth; ++j) {
    const cplx next = ((z - co.diagonal(j)) * p.cur - t_prev * p.prev) / t_cur;
    p.prev = p.cur;
    p.cur = next;
    p.renormalise();
    const double mag = std::abs(p.cur);
    out[j + 1] = {mag > 0.0 ? std::log(mag) + p.scale : -std::numeric_limits<double>::infinity(),
                  std::arg(p.cur)};
    t_prev = t_cur;
    t_cur = co.coupling(j + 1);
  }
  return out;
}

SAClassification classify(const TruncationSpec& spec, std::size_t depth) {
  spec.validate();
  if (depth < kMinProbeDepth) {
    throw InvalidArgument("probe depth must be >= " + std::to_string(kMinProbeDepth));
  }
  const cplx up{0.0, 1.0};
  const auto psi_up = deficiency_solution(spec, up, depth);
  const auto psi_down = deficiency_solution(spec, std::conj(up), depth);
  const Evidence full = assess(psi_up, depth);
  const Evidence half = assess(psi_up, depth / 2);
  const Evidence mirror = assess(psi_down, depth);

  SAClassification out;
  out.probe_depth = depth;
  out.decay_exponent = full.decay_exponent;
  out.tail_indices = full.tail_indices;
  out.log_tail_norms = full.log_tail_norms;
  for (double l : full.log_tail_norms) out.tail_norms.push_back(std::exp(l));
  for (double l : full.log_ratios) out.block_ratios.push_back(std::exp(l));
  out.backward_independence = backward_independence(spec, up, depth, depth / 2);

  std::ostringstream diag;
  out.verdict = full.verdict;
  if (full.verdict == Verdict::inconclusive) {
    diag << "block ratios do not settle on one side of " << kBlockRatioThreshold << "; ";
  }
  if (mirror.verdict != full.verdict) {
    diag << "z=+i gives " << to_string(full.verdict) << " but z=-i gives "
         << to_string(mirror.verdict) << "; ";
    out.verdict = Verdict::inconclusive;
  }
  if (half.verdict != full.verdict) {
    diag << "depth " << depth / 2 << " gives " << to_string(half.verdict) << " but depth "
         << depth << " gives " << to_string(full.verdict) << "; ";
    out.verdict = Verdict::inconclusive;
  }
  if (full.verdict == Verdict::limit_circle && out.backward_independence < 1e-8) {
    diag << "forward solution looks square summable but backward recursion finds a dominant "
            "solution (independence "
         << out.backward_independence << "); ";
    out.verdict = Verdict::inconclusive;
  }
  if (out.verdict != Verdict::inconclusive) {
    diag << "stable at depths " << depth / 2 << " and " << depth << " for z=+i and z=-i";
  }
  out.diagnostic = diag.str();
  return out;
}

CriticalScan critical_scan(int n, int order, std::span<const double> strengths,
                           std::size_t depth) {
  KerrSpec{order, 0.0}.validate();
  if (n != 2 * order) {
    throw InvalidArgument("critical_scan needs n = 2h, got n=" + std::to_string(n) +
                          " h=" + std::to_string(order));
  }
  CriticalScan scan;
  scan.n = n;
  scan.order = order;
  scan.strengths.assign(strengths.begin(), strengths.end());
  for (double k : strengths) {
    scan.results.push_back(classify({n, 1, KerrSpec{order, k}}, depth));
  }
  for (std::size_t i = 0; i + 1 < scan.results.size(); ++i) {
    if (scan.results[i].verdict == Verdict::limit_circle &&
        scan.results[i + 1].verdict == Verdict::limit_point) {
      scan.flip = std::make_pair(scan.strengths[i], scan.strengths[i + 1]);
    }
  }
  return scan;
}

}  // namespace squeeze
