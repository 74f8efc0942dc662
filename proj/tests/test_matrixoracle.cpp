#include <doctest.h>

#include <stdexcept>

#include "nclt/matrix_oracle.hpp"

using namespace nclt;

TEST_CASE("self-adjoint validation and trace state") {
  auto I = SelfAdjointMatrix::identity(4);
  CHECK(trace_mean(I.matrix()).real() == doctest::Approx(1.0));
  CHECK(I.trace_mean_power(5) == doctest::Approx(1.0));

  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(SelfAdjointMatrix{bad}, std::invalid_argument);

  // tracial and positive on products, within tolerance
  auto X = SelfAdjointMatrix::random_gaussian(5, 11);
  auto Y = SelfAdjointMatrix::random_gaussian(5, 22);
  auto ab = trace_mean(X.matrix() * Y.matrix());
  auto ba = trace_mean(Y.matrix() * X.matrix());
  CHECK(std::abs(ab - ba) < 1e-10);
  CHECK(trace_mean((X.matrix().adjoint() * X.matrix()).eval()).real() >= -1e-12);
}

TEST_CASE("matrix powers via eigendecomposition") {
  auto X = SelfAdjointMatrix::random_gaussian(4, 99);
  ComplexMatrix direct = X.matrix() * X.matrix() * X.matrix();
  CHECK((X.power(3) - direct).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((X.power(0) - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("generalized trace inequality: identity and r=1 reduction") {
  auto I = SelfAdjointMatrix::identity(3);
  auto check = cs_inequality_check(I, I, {{2, 3}, {1, 1}});
  CHECK(check.lhs == doctest::Approx(1.0));
  CHECK(check.rhs == doctest::Approx(1.0));
  CHECK(check.holds);

  // r = 1 is the classical trace Cauchy-Schwartz; compare against the
  // direct formulation |tr̄(X^m Y^n)|^2 <= tr̄(X^2m) tr̄(Y^2n)
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto X = SelfAdjointMatrix::random_gaussian(4, seed);
    auto Y = SelfAdjointMatrix::random_gaussian(4, seed + 1000);
    auto r1 = cs_inequality_check(X, Y, {{1, 1}});
    double direct = std::abs(trace_mean(X.matrix() * Y.matrix()));
    CHECK(r1.lhs == doctest::Approx(direct));
    CHECK(r1.lhs * r1.lhs <=
          X.trace_mean_power(2) * Y.trace_mean_power(2) + 1e-10);
    CHECK(r1.holds);
  }
}

TEST_CASE("generalized trace inequality: argument validation") {
  auto X = SelfAdjointMatrix::identity(2);
  CHECK_THROWS_AS(cs_inequality_check(X, X, {}), std::invalid_argument);
  CHECK_THROWS_AS(cs_inequality_check(X, X, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(
      cs_inequality_check(X, X, {{1, 1}, {1, 1}, {1, 1}, {1, 1}}),
      std::invalid_argument);
  CHECK_THROWS_AS(cs_inequality_check(X, SelfAdjointMatrix::identity(3), {{1, 1}}),
                  std::invalid_argument);
}

TEST_CASE("lyapunov inequality") {
  auto I = SelfAdjointMatrix::identity(3);
  auto eq = lyapunov_check(I, 2, 4);
  CHECK(eq.lhs == doctest::Approx(eq.rhs));
  CHECK(eq.holds);

  auto hand = lyapunov_check(SelfAdjointMatrix::diagonal({2, 0, 0, 0}), 1, 2);
  CHECK(hand.lhs == doctest::Approx(0.5));
  CHECK(hand.rhs == doctest::Approx(1.0));
  CHECK(hand.holds);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto X = SelfAdjointMatrix::random_gaussian(4, seed * 7);
    CHECK(lyapunov_check(X, 2, 4).holds);
  }
  CHECK_THROWS_AS(lyapunov_check(I, 2, 2), std::invalid_argument);
}

TEST_CASE("holder inequality") {
  auto I = SelfAdjointMatrix::identity(3);
  auto eq = holder_check({I, I}, {2, 2});
  CHECK(eq.lhs == doctest::Approx(1.0));
  CHECK(eq.rhs == doctest::Approx(1.0));

  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto X = SelfAdjointMatrix::random_gaussian(5, seed);
    auto Y = SelfAdjointMatrix::random_gaussian(5, seed + 31);
    auto Z = SelfAdjointMatrix::random_gaussian(5, seed + 62);
    CHECK(holder_check({X, Y}, {2, 2}).holds);
    CHECK(holder_check({X, Y, Z}, {3, 3, 3}).holds);
  }

  CHECK_THROWS_AS(holder_check({I, I}, {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(holder_check({I, I}, {2}), std::invalid_argument);
}

TEST_CASE("absolute expectation bound") {
  auto mixed = abs_expectation_check(SelfAdjointMatrix::diagonal({1, -1}));
  CHECK(mixed.lhs == doctest::Approx(0.0));
  CHECK(mixed.rhs == doctest::Approx(1.0));
  CHECK(mixed.holds);

  auto positive = abs_expectation_check(SelfAdjointMatrix::diagonal({1, 2, 3}));
  CHECK(positive.lhs == doctest::Approx(positive.rhs));

  for (std::uint64_t seed = 1; seed <= 30; ++seed)
    CHECK(abs_expectation_check(SelfAdjointMatrix::random_gaussian(5, seed)).holds);
}

TEST_CASE("seeded sweep: reproducible and clean") {
  SweepConfig config;
  config.seed = 7;
  config.trials = 60;
  auto report = run_inequality_sweep(config);
  CHECK(report.violations == 0);
  CHECK(report.rows.size() == 4u * 60u);

  auto again = run_inequality_sweep(config);
  CHECK(report.to_csv() == again.to_csv());

  SweepConfig other = config;
  other.seed = 8;
  CHECK(run_inequality_sweep(other).to_csv() != report.to_csv());

  SweepConfig bad = config;
  bad.trials = 0;
  CHECK_THROWS_AS(run_inequality_sweep(bad), std::invalid_argument);
}
