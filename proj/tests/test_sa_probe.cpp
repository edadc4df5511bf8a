#include <doctest.h>

#include <cmath>

#include "squeeze/error.hpp"
#include "squeeze/sa_probe.hpp"

using namespace squeeze;

namespace {
TruncationSpec bare(int n) { return {n, 1, std::nullopt}; }
TruncationSpec kerr(int n, int h, double k) { return {n, 1, KerrSpec{h, k}}; }
}  // namespace

TEST_SUITE("sa_probe") {

TEST_CASE("deficiency solution satisfies the recurrence") {
  const auto spec = kerr(3, 2, 0.2);
  const std::complex<double> z{0.0, 1.0};
  const auto psi = deficiency_solution(spec, z, 2000);
  REQUIRE(psi.size() == 2001);
  CHECK(psi[0].log_abs == 0.0);
  for (std::size_t j = 1; j < 40; ++j) {
    const auto lhs = squeezing_coupling(3, j - 1) * psi[j - 1].value() +
                     kerr_diagonal(3 * j, spec.kerr) * psi[j].value() +
                     squeezing_coupling(3, j) * psi[j + 1].value();
    CHECK(std::abs(lhs - z * psi[j].value()) <= 1e-9 * std::abs(z * psi[j].value()) + 1e-300);
  }
}

TEST_CASE("decay exponents for K = 0 approach n/4") {
  for (int n = 3; n <= 6; ++n) {
    const auto c = classify(bare(n), 100000);
    CHECK(c.decay_exponent == doctest::Approx(n / 4.0).epsilon(0.05 / (n / 4.0)));
    CHECK(c.verdict == Verdict::limit_circle);
  }
}

TEST_CASE("n = 2 decays like j^-1/4 and is limit point") {
  const auto c = classify(bare(2), 100000);
  CHECK(c.decay_exponent == doctest::Approx(0.25).epsilon(0.05));
  CHECK(c.verdict == Verdict::limit_point);
}

TEST_CASE("n = 1 tail diverges") {
  const auto c = classify(bare(1), 100000);
  CHECK(c.verdict == Verdict::limit_point);
  CHECK(c.log_tail_norms.back() > c.log_tail_norms.front());
}

TEST_CASE("tail norms are partial sums at geometric indices") {
  const auto c = classify(bare(4), 4096);
  REQUIRE(c.tail_indices.size() == c.tail_norms.size());
  for (std::size_t k = 0; k < c.tail_indices.size(); ++k) {
    CHECK(c.tail_indices[k] == (std::size_t{2} << k) - 1);
    if (k) CHECK(c.tail_norms[k] >= c.tail_norms[k - 1]);
  }
  CHECK(std::isfinite(c.decay_exponent));
}

TEST_CASE("kerr classification across the critical point") {
  CHECK(classify(kerr(3, 2, 0.5), 100000).verdict == Verdict::limit_point);
  CHECK(classify(kerr(4, 2, 1.0), 100000).verdict == Verdict::limit_circle);
  CHECK(classify(kerr(4, 2, 3.0), 100000).verdict == Verdict::limit_point);
}

TEST_CASE("critical scan brackets K = 2") {
  const std::vector<double> ks{1.0, 1.5, 1.9, 2.1, 2.5, 3.0};
  const auto scan = critical_scan(4, 2, ks, 100000);
  REQUIRE(scan.flip.has_value());
  CHECK(scan.flip->first == 1.9);
  CHECK(scan.flip->second == 2.1);
}

TEST_CASE("critical scan input checks") {
  const std::vector<double> ks{1.0};
  CHECK_THROWS_AS(critical_scan(6, 3, ks, 1000), InvalidArgument);
  CHECK_THROWS_AS(critical_scan(3, 2, ks, 1000), InvalidArgument);
  CHECK_THROWS_AS(classify(bare(3), 999), InvalidArgument);
  CHECK_THROWS_AS(deficiency_solution(bare(3), {1.0, 0.0}, 10), InvalidArgument);
}

TEST_CASE("verdict descriptions") {
  CHECK(describe(Verdict::limit_point) == "limit_point (essentially self-adjoint)");
  CHECK(describe(Verdict::limit_circle) == "limit_circle (not essentially self-adjoint)");
}

}
