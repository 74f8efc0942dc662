#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nclt {

using ComplexMatrix = Eigen::MatrixXcd;

// tolerance for inequality checks: lhs <= rhs + tol * max(1, rhs)
inline constexpr double kTraceTolerance = 1e-10;

// Hermitian matrix with a cached eigendecomposition; powers and absolute
// powers go through the eigenvalues rather than repeated multiplication.
class SelfAdjointMatrix {
 public:
  explicit SelfAdjointMatrix(ComplexMatrix m);  // throws if not Hermitian

  static SelfAdjointMatrix identity(int dim);
  static SelfAdjointMatrix diagonal(const std::vector<double>& entries);
  // GUE-type matrix: independent standard Gaussian entries, Hermitian
  // symmetrized; fully determined by the seed.
  static SelfAdjointMatrix random_gaussian(int dim, std::uint64_t seed);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }

  ComplexMatrix power(int p) const;            // X^p, p >= 0
  double trace_mean_power(int p) const;        // tr(X^p)/d
  double trace_mean_abs_power(double p) const; // tr(|X|^p)/d

 private:
  ComplexMatrix m_;
  Eigen::VectorXd evals_;
  ComplexMatrix evecs_;
};

// normalized trace tr(M)/d
std::complex<double> trace_mean(const ComplexMatrix& m);

// tr(|M|)/d for an arbitrary matrix, via singular values
double trace_mean_abs(const ComplexMatrix& m);

struct InequalityCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

// |tr̄(X^{m_1}Y^{n_1}...X^{m_r}Y^{n_r})| against the product of the
// 2^r-th-power trace means, each to the 2^-r. Requires 1 <= r <= 3,
// exponents >= 1, matching dimensions <= 8.
InequalityCheck cs_inequality_check(const SelfAdjointMatrix& X,
                                    const SelfAdjointMatrix& Y,
                                    const std::vector<std::pair<int, int>>& exponents);

// (tr̄|X|^p)^{1/p} <= (tr̄|X|^q)^{1/q} for 1 <= p < q.
InequalityCheck lyapunov_check(const SelfAdjointMatrix& X, int p, int q);

// tr̄|A_1...A_s| <= prod_i (tr̄|A_i|^{p_i})^{1/p_i} with sum_i 1/p_i = 1,
// validated exactly on the integer exponents.
InequalityCheck holder_check(const std::vector<SelfAdjointMatrix>& factors,
                             const std::vector<int>& exponents);

// |tr̄(X)| <= tr̄|X|.
InequalityCheck abs_expectation_check(const SelfAdjointMatrix& X);

struct SweepConfig {
  std::uint64_t seed = 7;
  int trials = 1000;
  int min_dim = 2;
  int max_dim = 6;
  int max_power = 2;
};

struct SweepRow {
  std::string family;  // "cauchy-schwartz", "holder", "lyapunov", "abs"
  int trial = 0;
  int dim = 0;
  int r = 0;
  std::string exponents;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  bool holds = false;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepRow> rows;
  std::size_t violations = 0;
  std::string to_csv() const;
};

// Seeded Monte Carlo run of all four inequality families; per-trial seeds
// derive deterministically from the master seed.
SweepReport run_inequality_sweep(const SweepConfig& config);

}  // namespace nclt
