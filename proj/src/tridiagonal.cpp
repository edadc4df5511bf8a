#include "squeeze/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "squeeze/error.hpp"

namespace squeeze::tridiag {
namespace {

constexpr int kMaxIterationsPerValue = 60;

void check_shapes(std::span<const double> diag, std::span<const double> offdiag) {
  if (diag.empty()) throw InvalidArgument("tridiagonal matrix must have dimension >= 1");
  if (offdiag.size() + 1 != diag.size()) {
    throw InvalidArgument("off-diagonal length must be dimension - 1");
  }
}

double safe_pivot(double offdiag_sq_max) {
  return std::numeric_limits<double>::min() * std::max(1.0, offdiag_sq_max);
}

}  // namespace

Eigensystem implicit_ql(std::span<const double> diag, std::span<const double> offdiag,
                        Accumulate mode) {
  check_shapes(diag, offdiag);
  const std::size_t n = diag.size();
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());

  // Rows of Z that are updated by each rotation.
  const std::size_t rows = mode == Accumulate::full ? n : (mode == Accumulate::first_row ? 1 : 0);
  std::vector<double> z(rows * n, 0.0);
  if (mode == Accumulate::full) {
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  } else if (mode == Accumulate::first_row) {
    z[0] = 1.0;
  }
  // Column i of Z starts at z[i * rows].
  auto rotate = [&](std::size_t i, double s, double c) {
    double* zi = z.data() + i * rows;
    double* zi1 = zi + rows;
    for (std::size_t k = 0; k < rows; ++k) {
      const double f = zi1[k];
      zi1[k] = s * zi[k] + c * f;
      zi[k] = c * zi[k] - s * f;
    }
  };

  // Isolated 2x2 block [[a, b], [b, c]] in closed form, as LAPACK's dlaev2.
  auto solve_2x2 = [&](double& a, double& b, double& c) {
    const std::size_t i = static_cast<std::size_t>(&a - d.data());
    const double sm = a + c;
    const double df = a - c;
    const double adf = std::abs(df);
    const double tb = b + b;
    const double ab = std::abs(tb);
    const double acmx = std::abs(a) > std::abs(c) ? a : c;
    const double acmn = std::abs(a) > std::abs(c) ? c : a;
    double rt;
    if (adf > ab) {
      rt = adf * std::sqrt(1.0 + (ab / adf) * (ab / adf));
    } else if (adf < ab) {
      rt = ab * std::sqrt(1.0 + (adf / ab) * (adf / ab));
    } else {
      rt = ab * std::sqrt(2.0);
    }
    double rt1, rt2;
    int sgn1;
    if (sm < 0.0) {
      rt1 = 0.5 * (sm - rt);
      sgn1 = -1;
      rt2 = (acmx / rt1) * acmn - (b / rt1) * b;
    } else if (sm > 0.0) {
      rt1 = 0.5 * (sm + rt);
      sgn1 = 1;
      rt2 = (acmx / rt1) * acmn - (b / rt1) * b;
    } else {
      rt1 = 0.5 * rt;
      rt2 = -0.5 * rt;
      sgn1 = 1;
    }
    int sgn2;
    double cs;
    if (df >= 0.0) {
      cs = df + rt;
      sgn2 = 1;
    } else {
      cs = df - rt;
      sgn2 = -1;
    }
    double cs1, sn1;
    if (std::abs(cs) > ab) {
      const double ct = -tb / cs;
      sn1 = 1.0 / std::sqrt(1.0 + ct * ct);
      cs1 = ct * sn1;
    } else if (ab == 0.0) {
      cs1 = 1.0;
      sn1 = 0.0;
    } else {
      const double tn = -cs / tb;
      cs1 = 1.0 / std::sqrt(1.0 + tn * tn);
      sn1 = tn * cs1;
    }
    if (sgn1 == sgn2) {
      const double tn = cs1;
      cs1 = -sn1;
      sn1 = tn;
    }
    a = rt1;
    c = rt2;
    b = 0.0;
    double* zi = z.data() + i * rows;
    double* zi1 = zi + rows;
    for (std::size_t k = 0; k < rows; ++k) {
      const double u = zi[k];
      const double v = zi1[k];
      zi[k] = cs1 * u + sn1 * v;
      zi1[k] = -sn1 * u + cs1 * v;
    }
  };

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (m == l + 1) {
        solve_2x2(d[l], e[l], d[l + 1]);
        continue;
      }
      if (iter++ == kMaxIterationsPerValue) {
        throw ConvergenceError("implicit QL did not converge for eigenvalue index " +
                                   std::to_string(l),
                               l);
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t ii = m; ii-- > l;) {
        const double f = s * e[ii];
        const double b = c * e[ii];
        r = std::hypot(f, g);
        e[ii + 1] = r;
        if (r == 0.0) {
          d[ii + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - b;
        if (rows > 0) rotate(ii, s, c);
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  Eigensystem out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (rows > 0) {
    out.vectors.resize(rows * n);
    for (std::size_t k = 0; k < n; ++k) {
      std::copy_n(z.data() + order[k] * rows, rows, out.vectors.data() + k * rows);
    }
  }
  return out;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag_sq,
                        double x) {
  double e2max = 0.0;
  for (double v : offdiag_sq) e2max = std::max(e2max, v);
  const double pivmin = safe_pivot(e2max);
  std::size_t count = 0;
  double q = diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    q = diag[i] - x - offdiag_sq[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

Bounds gershgorin(std::span<const double> diag, std::span<const double> offdiag) {
  check_shapes(diag, offdiag);
  Bounds b{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(offdiag[i - 1]);
    if (i + 1 < diag.size()) radius += std::abs(offdiag[i]);
    b.lo = std::min(b.lo, diag[i] - radius);
    b.hi = std::max(b.hi, diag[i] + radius);
  }
  const double pad = 2.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(b.lo), std::abs(b.hi)) +
                     std::numeric_limits<double>::min();
  b.lo -= pad;
  b.hi += pad;
  return b;
}

double bisect_eigenvalue(std::span<const double> diag, std::span<const double> offdiag_sq,
                         std::size_t k, double lo, double hi) {
  if (k >= diag.size()) throw InvalidArgument("eigenvalue index out of range");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double floor = std::numeric_limits<double>::min() * 16.0;
  // Each step halves the bracket, so this also covers the walk down to
  // denormal range for an exact zero eigenvalue.
  for (int it = 0; it < 2200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(2.0 * eps * std::max(std::abs(lo), std::abs(hi)), floor) ||
        mid <= lo || mid >= hi) {
      return mid;
    }
    if (sturm_count(diag, offdiag_sq, mid) >= k + 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> twisted_eigenvector(std::span<const double> diag,
                                        std::span<const double> offdiag, double lambda) {
  check_shapes(diag, offdiag);
  const std::size_t n = diag.size();
  std::vector<double> x(n, 0.0);
  if (n == 1) {
    x[0] = 1.0;
    return x;
  }
  double e2max = 0.0;
  for (double t : offdiag) e2max = std::max(e2max, t * t);
  const double pivmin = safe_pivot(e2max);
  auto guard = [pivmin](double v) { return std::abs(v) < pivmin ? -pivmin : v; };

  std::vector<double> dplus(n);
  std::vector<double> dminus(n);
  dplus[0] = guard(diag[0] - lambda);
  for (std::size_t i = 1; i < n; ++i) {
    dplus[i] = guard(diag[i] - lambda - offdiag[i - 1] * offdiag[i - 1] / dplus[i - 1]);
  }
  dminus[n - 1] = guard(diag[n - 1] - lambda);
  for (std::size_t i = n - 1; i-- > 0;) {
    dminus[i] = guard(diag[i] - lambda - offdiag[i] * offdiag[i] / dminus[i + 1]);
  }
  std::size_t twist = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma = dplus[i] + dminus[i] - (diag[i] - lambda);
    if (std::abs(gamma) < best) {
      best = std::abs(gamma);
      twist = i;
    }
  }

  // Stop once two consecutive components are negligible; a single one can be
  // a node (every other component of a zero mode vanishes).
  constexpr double tiny = 1e-280;
  x[twist] = 1.0;
  for (std::size_t i = twist; i-- > 0;) {
    x[i] = -(offdiag[i] / dplus[i]) * x[i + 1];
    if (std::abs(x[i]) < tiny && std::abs(x[i + 1]) < tiny) {
      x[i] = x[i + 1] = 0.0;
      break;
    }
  }
  for (std::size_t i = twist + 1; i < n; ++i) {
    x[i] = -(offdiag[i - 1] / dminus[i]) * x[i - 1];
    if (std::abs(x[i]) < tiny && std::abs(x[i - 1]) < tiny) {
      x[i] = x[i - 1] = 0.0;
      break;
    }
  }
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  double ss = 0.0;
  for (double v : x) ss += (v / scale) * (v / scale);
  const double norm = scale * std::sqrt(ss);
  for (double& v : x) v /= norm;
  return x;
}

}  // namespace squeeze::tridiag
