#include "nclt/matrix_oracle.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nclt/rational.hpp"

namespace nclt {

namespace {

bool within_tolerance(double lhs, double rhs) {
  return lhs <= rhs + kTraceTolerance * std::max(1.0, rhs);
}

// Box-Muller over the standard-mandated mt19937_64 stream; avoids the
// implementation-defined std::normal_distribution so runs are reproducible.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return radius * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  double uniform01() {
    // (0, 1]: log() stays finite
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0;
};

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t z = master + (salt + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

SelfAdjointMatrix::SelfAdjointMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("matrix must be square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
}

SelfAdjointMatrix SelfAdjointMatrix::identity(int dim) {
  return SelfAdjointMatrix(ComplexMatrix::Identity(dim, dim));
}

SelfAdjointMatrix SelfAdjointMatrix::diagonal(const std::vector<double>& entries) {
  const int d = static_cast<int>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return SelfAdjointMatrix(std::move(m));
}

SelfAdjointMatrix SelfAdjointMatrix::random_gaussian(int dim, std::uint64_t seed) {
  GaussianStream g(seed);
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = g.next();
    for (int j = i + 1; j < dim; ++j) {
      const double re = g.next() / std::sqrt(2.0);
      const double im = g.next() / std::sqrt(2.0);
      m(i, j) = std::complex<double>(re, im);
      m(j, i) = std::complex<double>(re, -im);
    }
  }
  return SelfAdjointMatrix(std::move(m));
}

ComplexMatrix SelfAdjointMatrix::power(int p) const {
  if (p < 0) throw std::invalid_argument("power must be >= 0");
  Eigen::VectorXd powered(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i)
    powered(i) = std::pow(evals_(i), p);
  return evecs_ * powered.asDiagonal() * evecs_.adjoint();
}

double SelfAdjointMatrix::trace_mean_power(int p) const {
  double total = 0;
  for (Eigen::Index i = 0; i < evals_.size(); ++i) total += std::pow(evals_(i), p);
  return total / static_cast<double>(evals_.size());
}

double SelfAdjointMatrix::trace_mean_abs_power(double p) const {
  double total = 0;
  for (Eigen::Index i = 0; i < evals_.size(); ++i)
    total += std::pow(std::abs(evals_(i)), p);
  return total / static_cast<double>(evals_.size());
}

std::complex<double> trace_mean(const ComplexMatrix& m) {
  return m.trace() / static_cast<double>(m.rows());
}

double trace_mean_abs(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum() / static_cast<double>(m.rows());
}

InequalityCheck cs_inequality_check(const SelfAdjointMatrix& X,
                                    const SelfAdjointMatrix& Y,
                                    const std::vector<std::pair<int, int>>& exponents) {
  const int r = static_cast<int>(exponents.size());
  if (r < 1 || r > 3) throw std::invalid_argument("need 1 <= r <= 3");
  if (X.dim() != Y.dim()) throw std::invalid_argument("dimension mismatch");
  if (X.dim() > 8) throw std::invalid_argument("dimension must be <= 8");
  for (auto [m, n] : exponents)
    if (m < 1 || n < 1) throw std::invalid_argument("exponents must be >= 1");

  ComplexMatrix product = ComplexMatrix::Identity(X.dim(), X.dim());
  for (auto [m, n] : exponents) product = product * X.power(m) * Y.power(n);
  const double lhs = std::abs(trace_mean(product));

  const double weight = std::pow(2.0, -r);
  const int factor = 1 << r;
  double rhs = 1.0;
  for (auto [m, n] : exponents) {
    rhs *= std::pow(std::max(0.0, X.trace_mean_power(factor * m)), weight);
    rhs *= std::pow(std::max(0.0, Y.trace_mean_power(factor * n)), weight);
  }
  return {lhs, rhs, within_tolerance(lhs, rhs)};
}

InequalityCheck lyapunov_check(const SelfAdjointMatrix& X, int p, int q) {
  if (p < 1 || q <= p) throw std::invalid_argument("need 1 <= p < q");
  const double lhs = std::pow(X.trace_mean_abs_power(p), 1.0 / p);
  const double rhs = std::pow(X.trace_mean_abs_power(q), 1.0 / q);
  return {lhs, rhs, within_tolerance(lhs, rhs)};
}

InequalityCheck holder_check(const std::vector<SelfAdjointMatrix>& factors,
                             const std::vector<int>& exponents) {
  if (factors.empty() || factors.size() != exponents.size())
    throw std::invalid_argument("factor/exponent mismatch");
  Rational reciprocal_sum = 0;
  for (int p : exponents) {
    if (p < 1) throw std::invalid_argument("exponents must be >= 1");
    reciprocal_sum += canonical(Rational(1, p));
  }
  if (reciprocal_sum != 1)
    throw std::invalid_argument("exponent reciprocals must sum to 1");

  ComplexMatrix product =
      ComplexMatrix::Identity(factors[0].dim(), factors[0].dim());
  for (const auto& f : factors) product = product * f.matrix();
  const double lhs = trace_mean_abs(product);

  double rhs = 1.0;
  for (std::size_t i = 0; i < factors.size(); ++i)
    rhs *= std::pow(factors[i].trace_mean_abs_power(exponents[i]),
                    1.0 / exponents[i]);
  return {lhs, rhs, within_tolerance(lhs, rhs)};
}

InequalityCheck abs_expectation_check(const SelfAdjointMatrix& X) {
  const double lhs = std::abs(trace_mean(X.matrix()));
  const double rhs = X.trace_mean_abs_power(1.0);
  return {lhs, rhs, within_tolerance(lhs, rhs)};
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string SweepReport::to_csv() const {
  std::string out;
  out += "# inequality sweep seed=" + std::to_string(config.seed) +
         " trials=" + std::to_string(config.trials) +
         " dims=" + std::to_string(config.min_dim) + ".." +
         std::to_string(config.max_dim) + "\n";
  out += "family,trial,dim,r,exponents,lhs,rhs,margin,holds\n";
  for (const auto& row : rows) {
    out += row.family + "," + std::to_string(row.trial) + "," +
           std::to_string(row.dim) + "," + std::to_string(row.r) + "," +
           row.exponents + "," + format_double(row.lhs) + "," +
           format_double(row.rhs) + "," + format_double(row.margin) + "," +
           (row.holds ? "1" : "0") + "\n";
  }
  return out;
}

SweepReport run_inequality_sweep(const SweepConfig& config) {
  if (config.trials < 1 || config.min_dim < 1 || config.max_dim < config.min_dim ||
      config.max_dim > 8 || config.max_power < 1)
    throw std::invalid_argument("bad sweep configuration");

  SweepReport report;
  report.config = config;
  const int dim_span = config.max_dim - config.min_dim + 1;

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t base = mix_seed(config.seed, static_cast<std::uint64_t>(trial));
    const int d = config.min_dim + trial % dim_span;
    auto X = SelfAdjointMatrix::random_gaussian(d, mix_seed(base, 1));
    auto Y = SelfAdjointMatrix::random_gaussian(d, mix_seed(base, 2));
    auto Z = SelfAdjointMatrix::random_gaussian(d, mix_seed(base, 3));

    std::mt19937_64 pick(mix_seed(base, 4));
    auto exp_choice = [&] {
      return 1 + static_cast<int>(pick() % static_cast<std::uint64_t>(config.max_power));
    };

    auto push = [&](const std::string& family, int r, const std::string& exps,
                    const InequalityCheck& check) {
      report.rows.push_back({family, trial, d, r, exps, check.lhs, check.rhs,
                             check.rhs - check.lhs, check.holds});
      if (!check.holds) ++report.violations;
    };

    {
      const int r = 1 + trial % 3;
      std::vector<std::pair<int, int>> exps;
      std::string label;
      for (int i = 0; i < r; ++i) {
        int m = exp_choice(), n = exp_choice();
        exps.emplace_back(m, n);
        if (i) label += ';';
        label += std::to_string(m) + ":" + std::to_string(n);
      }
      push("cauchy-schwartz", r, label, cs_inequality_check(X, Y, exps));
    }

    {
      const int s = 2 + trial % 2;
      std::vector<SelfAdjointMatrix> factors{X, Y};
      if (s == 3) factors.push_back(Z);
      std::vector<int> exps(static_cast<std::size_t>(s), s);
      push("holder", s, std::to_string(s) + "x" + std::to_string(s),
           holder_check(factors, exps));
    }

    {
      static constexpr std::pair<int, int> kOrders[] = {{1, 2}, {2, 4}, {2, 3}, {3, 6}};
      auto [p, q] = kOrders[trial % 4];
      push("lyapunov", 1, std::to_string(p) + "<" + std::to_string(q),
           lyapunov_check(X, p, q));
    }

    push("abs", 1, "1", abs_expectation_check(X));
  }
  return report;
}

}  // namespace nclt
