#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "squeeze/error.hpp"
#include "squeeze/propagate.hpp"

using namespace squeeze;

namespace {

Trajectory run(int n, std::size_t dim, double r_max, double dr, Method m,
               std::optional<KerrSpec> k = std::nullopt, bool states = false) {
  const TruncationSpec spec{n, dim, k};
  PropagationConfig cfg;
  cfg.r_max = r_max;
  cfg.dr = dr;
  cfg.method = m;
  cfg.record_states = states;
  return propagate_vacuum(build_hamiltonian(spec), spec, cfg);
}

double at(const Trajectory& t, double r) {
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t.r_grid[k] - r) < 1e-9) return t.photon_number[k];
  }
  FAIL("grid value missing");
  return 0;
}

// max_j |a_j - phase b_j| after aligning the global phase.
double phase_aligned_distance(const State& a, const std::vector<oracle::cld>& b_phys) {
  State b(b_phys.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    // physical -> Jacobi frame: multiply by (-i)^j
    std::complex<double> ph = 1;
    for (std::size_t q = 0; q < j % 4; ++q) ph *= std::complex<double>(0, -1);
    b[j] = ph * std::complex<double>(static_cast<double>(b_phys[j].real()),
                                     static_cast<double>(b_phys[j].imag()));
  }
  std::complex<double> overlap = 0;
  for (std::size_t j = 0; j < a.size(); ++j) overlap += std::conj(b[j]) * a[j];
  const auto phase = overlap / std::abs(overlap);
  double d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - phase * b[j]));
  return d;
}

}  // namespace

TEST_SUITE("propagate") {

TEST_CASE("grid is integer multiples of dr") {
  const auto g = make_grid(2.0, 0.01);
  REQUIRE(g.size() == 201);
  CHECK(g[0] == 0.0);
  CHECK(g[137] == 137 * 0.01);
  CHECK(g.back() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("photon number of basis states") {
  State e0(5, 0), e2(5, 0), mix(5, 0);
  e0[0] = 1;
  e2[2] = 1;
  mix[0] = mix[1] = 1 / std::sqrt(2.0);
  CHECK(photon_number(e0, 5) == 0.0);
  CHECK(photon_number(e2, 3) == 6.0);
  CHECK(photon_number(mix, 4) == doctest::Approx(2.0).epsilon(1e-15));
  State bad(3, 0);
  bad[0] = 1.1;
  CHECK_THROWS_AS(photon_number(bad, 1), InvalidArgument);
}

TEST_CASE("identity evolution at r = 0") {
  for (Method m : {Method::spectral, Method::chebyshev, Method::powering}) {
    const auto t = run(4, 50, 0.5, 0.1, m);
    CHECK(t.photon_number[0] == 0.0);
  }
}

TEST_CASE("two-photon squeezing follows sinh^2(2r)") {
  const auto t = run(2, 2000, 1.0, 0.01, Method::automatic);
  CHECK(at(t, 0.5) == doctest::Approx(std::pow(std::sinh(1.0), 2)).epsilon(1e-3 / 1.38));
  CHECK(std::abs(at(t, 1.0) - std::pow(std::sinh(2.0), 2)) < 1e-2);
}

TEST_CASE("displacement gives r^2") {
  const auto t = run(1, 2000, 1.5, 0.01, Method::automatic);
  for (double r : {0.5, 1.0, 1.2, 1.5}) CHECK(std::abs(at(t, r) - r * r) < 1e-4);
}

TEST_CASE("trajectory invariants") {
  for (Method m : {Method::spectral, Method::chebyshev}) {
    const auto t = run(3, 300, 2.0, 0.01, m);
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(t.norm_drift[k] <= 1e-8);
      CHECK(t.photon_number[k] >= 0.0);
      CHECK(t.photon_number[k] <= 3.0 * 299);
    }
  }
}

TEST_CASE("photon number is even in r") {
  const TruncationSpec spec{4, 400, std::nullopt};
  const auto h = build_hamiltonian(spec);
  std::vector<double> pos, neg;
  for (int k = 0; k <= 100; ++k) {
    pos.push_back(0.02 * k);
    neg.push_back(-0.02 * k);
  }
  for (Method m : {Method::spectral, Method::chebyshev}) {
    const auto a = evolve_vacuum(h, spec, pos, m);
    const auto b = evolve_vacuum(h, spec, neg, m);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::abs(a.photon_number[k] - b.photon_number[k]) <= 1e-8 * std::max(1.0, a.photon_number[k]));
    }
  }
}

TEST_CASE("spectral and chebyshev agree where chebyshev is affordable") {
  for (int n : {3, 4}) {
    for (std::size_t dim : {500ul, 501ul}) {
      const double r_max = n == 3 ? 2.0 : 0.5;
      const auto a = run(n, dim, r_max, 0.01, Method::spectral);
      const auto b = run(n, dim, r_max, 0.01, Method::chebyshev);
      double d = 0;
      for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.photon_number[k] - b.photon_number[k]));
      CHECK(d < 1e-6);
    }
  }
}

TEST_CASE("chebyshev refuses steps needing too many terms") {
  const TruncationSpec spec{6, 500, std::nullopt};
  PropagationConfig cfg;
  cfg.method = Method::chebyshev;
  try {
    propagate_vacuum(build_hamiltonian(spec), spec, cfg);
    FAIL("expected SeriesLengthError");
  } catch (const SeriesLengthError& e) {
    CHECK(e.required_terms() > cfg.max_series_terms);
  }
}

TEST_CASE("powering is refused above its size limit") {
  const TruncationSpec spec{1, kPoweringMaxDim + 1, std::nullopt};
  PropagationConfig cfg;
  cfg.method = Method::powering;
  CHECK_THROWS_AS(propagate_vacuum(build_hamiltonian(spec), spec, cfg), CostRefused);
}

TEST_CASE("powering needs an integer number of steps") {
  PropagationConfig cfg;
  cfg.method = Method::powering;
  cfg.r_max = 1.0;
  cfg.dr = 0.3;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.dr = 0.01;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("chebyshev coefficients reproduce exp(-i x y)") {
  for (double x : {0.0, 0.3, 5.0, 80.0}) {
    const auto c = chebyshev_coefficients(x);
    CHECK(c.size() <= chebyshev_series_length(x));
    for (double y : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
      std::complex<double> sum = 0;
      const double th = std::acos(y);
      for (std::size_t k = 0; k < c.size(); ++k) sum += c[k] * std::cos(k * th);
      CHECK(std::abs(sum - std::exp(std::complex<double>(0, -x * y))) < 1e-12);
    }
  }
}

TEST_CASE("all methods match the dense exponential oracle") {
  struct Case {
    int n;
    int dim;
    int order;
    double k;
  };
  for (Case c : {Case{1, 64, 0, 0}, Case{2, 64, 0, 0}, Case{3, 33, 0, 0}, Case{4, 64, 0, 0},
                 Case{3, 40, 2, 0.3}, Case{4, 24, 4, 1e-3}}) {
    const TruncationSpec spec{c.n, static_cast<std::size_t>(c.dim),
                              c.order ? std::optional<KerrSpec>(KerrSpec{c.order, c.k}) : std::nullopt};
    const auto h = build_hamiltonian(spec);
    const auto dense = oracle::physical_matrix(c.n, c.dim, c.order, c.k);
    std::vector<double> rs;
    for (int k = 0; k <= 10; ++k) rs.push_back(0.05 * k);
    for (Method m : {Method::spectral, Method::chebyshev, Method::powering}) {
      const auto t = evolve_vacuum(h, spec, rs, m, true);
      for (std::size_t k : {1ul, 4ul, 10ul}) {
        const auto ref = oracle::evolve_vacuum(dense, rs[k]);
        CAPTURE(c.n);
        CAPTURE(to_string(m));
        CHECK(phase_aligned_distance((*t.states)[k], ref) < 1e-9);
      }
    }
  }
}

TEST_CASE("method names") {
  CHECK(parse_method("auto") == Method::automatic);
  CHECK(parse_method("spectral") == Method::spectral);
  CHECK_THROWS_AS(parse_method("krylov"), InvalidArgument);
}

}
