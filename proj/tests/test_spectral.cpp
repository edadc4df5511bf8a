#include <doctest.h>

#include <cmath>

#include "squeeze/error.hpp"
#include "squeeze/spectral.hpp"

using namespace squeeze;

namespace {
SpectrumResult spec_of(int n, std::size_t dim, std::optional<KerrSpec> k = std::nullopt,
                       bool vectors = false) {
  return spectrum(build_hamiltonian({n, dim, k}), vectors);
}
}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("closed-form small spectra") {
  auto s = spec_of(3, 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(-std::sqrt(6.0)).epsilon(1e-14));
  CHECK(s.eigenvalues[1] == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(smallest_positive(s) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));

  s = spec_of(3, 3);
  CHECK(s.eigenvalues[0] == doctest::Approx(-std::sqrt(126.0)).epsilon(1e-14));
  CHECK(std::abs(s.eigenvalues[1]) < 1e-12);
  CHECK(s.eigenvalues[2] == doctest::Approx(std::sqrt(126.0)).epsilon(1e-14));
}

TEST_CASE("pm pairing and zero modes") {
  for (int n = 1; n <= 6; ++n) {
    for (std::size_t dim : {200ul, 201ul}) {
      const auto s = spec_of(n, dim);
      CHECK(symmetry_defect(s) <= 1e-10);
      CHECK(count_zero_modes(s) == dim % 2);
    }
  }
  const auto s = spec_of(3, 1001);
  CHECK(std::abs(s.eigenvalues[500]) <= 1e-10 * s.max_abs());
}

TEST_CASE("a kerr diagonal breaks the pairing") {
  CHECK(symmetry_defect(spec_of(3, 100, KerrSpec{2, 0.5})) > 0.1);
}

TEST_CASE("levels are non-degenerate for K = 0") {
  for (int n = 1; n <= 4; ++n) {
    for (std::size_t dim : {500ul, 501ul}) {
      const auto s = spec_of(n, dim);
      CHECK(min_gap(s) > 1e-8 * s.max_abs());
    }
  }
  for (int n = 5; n <= 6; ++n) {
    const auto s = spec_of(n, 500);
    CHECK(min_gap(s) > 0.0);
    CHECK(max_relative_crowding(s) < 1e6);
  }
}

TEST_CASE("mid-spectrum spacing for n = 1 scales like N^-1/2") {
  const auto a = spec_of(1, 1000);
  const auto b = spec_of(1, 4000);
  const double ga = a.eigenvalues[501] - a.eigenvalues[500];
  const double gb = b.eigenvalues[2001] - b.eigenvalues[2000];
  CHECK(ga / gb == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("log-log fit recovers planted power laws") {
  std::vector<double> x, y;
  for (int j = 1; j <= 40; ++j) {
    x.push_back(j);
    y.push_back(2.0 * std::pow(j, 1.5));
  }
  const auto f = fit_log_log(x, y);
  CHECK(std::abs(f.alpha - 2.0) / 2.0 < 1e-10);
  CHECK(std::abs(f.gamma - 1.5) / 1.5 < 1e-10);
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_log_log(std::span(x).first(7), std::span(y).first(7)), InvalidArgument);
}

TEST_CASE("interleaving j^1.2 with (j + 1/2)^1.2 keeps the exponent") {
  SpectrumResult odd, even;
  const int half = 200;
  for (int j = -half; j <= half; ++j) odd.eigenvalues.push_back((j < 0 ? -1 : 1) * std::pow(std::abs(j), 1.2));
  for (int j = -half; j < half; ++j) {
    const double x = j + 0.5;
    even.eigenvalues.push_back((x < 0 ? -1 : 1) * std::pow(std::abs(x), 1.2));
  }
  const auto f = interleaved_fit(even, odd);
  CHECK(f.gamma == doctest::Approx(1.2).epsilon(1e-3));
  CHECK(fit_power_law(odd).gamma == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(fit_power_law(even).gamma == doctest::Approx(1.2).epsilon(1e-12));
  CHECK_THROWS_AS(interleaved_fit(odd, odd), InvalidArgument);
}

TEST_CASE("vacuum overlap profile") {
  const auto s6 = spec_of(6, 1001, std::nullopt, true);
  const auto p6 = vacuum_overlap_profile(s6, 3);
  CHECK(p6.total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p6.weights[500 - p6.first_index] >= 0.9);

  const auto s4 = spec_of(4, 1000, std::nullopt, true);
  const auto p4 = vacuum_overlap_profile(s4, 1);
  CHECK(p4.weights[499 - p4.first_index] + p4.weights[500 - p4.first_index] >= 0.95);

  const auto s1 = spec_of(1, 1000, std::nullopt, true);
  const auto p1 = vacuum_overlap_profile(s1, 1);
  CHECK(p1.weights[500 - p1.first_index] < 0.1);

  CHECK_THROWS_AS(vacuum_overlap_profile(spec_of(1, 10), 1), InvalidArgument);
}

TEST_CASE("vacuum modes agree with full vectors") {
  const auto h = build_hamiltonian({3, 120, std::nullopt});
  const auto full = spectrum(h, true);
  const auto vm = vacuum_modes(h, 0.0);
  REQUIRE(vm.eigenvalues.size() == 120);
  double total = 0;
  for (std::size_t k = 0; k < 120; ++k) {
    CHECK(vm.eigenvalues[k] == doctest::Approx(full.eigenvalues[k]).epsilon(1e-12));
    const double w = full.eigenvectors->column(k)[0];
    CHECK(std::abs(std::abs(vm.weights[k]) - std::abs(w)) < 1e-12);
    total += vm.weights[k] * vm.weights[k];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smallest positive eigenvalue moves < 0.5% from dim 1000 to 4000, n = 3") {
  const double a = smallest_positive(spec_of(3, 1000));
  const double b = smallest_positive(spec_of(3, 4000));
  CHECK(std::abs(a - b) / a < 5e-3);
}

TEST_CASE("smallest positive eigenvalue converges for n = 4 and decays for n = 1") {
  const double a = smallest_positive(spec_of(4, 1000));
  const double b = smallest_positive(spec_of(4, 4000));
  CHECK(std::abs(a - b) / a < 5e-3);
  const std::vector<std::size_t> dims{250, 500, 1000, 2000, 4000};
  std::vector<double> x, y;
  for (auto d : dims) {
    x.push_back(static_cast<double>(d));
    y.push_back(smallest_positive(spec_of(1, d)));
  }
  CHECK(fit_log_log(x, y, 3).gamma == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("extrapolation returns a limit below the data") {
  const std::vector<std::size_t> dims{200, 400, 600, 800, 1000};
  const auto ex = extrapolate_smallest(3, dims);
  CHECK(ex.lambda_inf >= 0.0);
  CHECK(ex.lambda_inf < ex.smallest.back());
  CHECK(ex.fit.r_squared > 0.9);
}

TEST_CASE("scaling input checks") {
  const std::vector<std::size_t> odd{201, 400, 800};
  const std::vector<std::size_t> two{200, 400};
  CHECK_THROWS_AS(largest_eigenvalue_scaling(1, odd), InvalidArgument);
  CHECK_THROWS_AS(largest_eigenvalue_scaling(1, two), InvalidArgument);
}

TEST_CASE("no positive eigenvalue is an error") {
  SpectrumResult s;
  s.eigenvalues = {-2.0, -1.0};
  CHECK_THROWS_AS(smallest_positive(s), InvalidArgument);
}

}
