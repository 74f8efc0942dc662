#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nclt/group_model.hpp"
#include "nclt/moment_models.hpp"

namespace nclt {

// 0 for odd m, Catalan(m/2) for even m: the moments of the unit-variance
// semicircle distribution.
Rational semicircle_moment(unsigned m);

// Which index relabelings leave a mixed moment invariant. Equality: only
// the equality pattern of the index tuple matters. Adjacency: consecutive
// generator indices are coupled (the group relators tie k to k-1), so a
// relabeling must also preserve |i - j| = 1 versus |i - j| >= 2.
enum class IndexPattern { Equality, Adjacency };

// Normalized sum S = (x_1 + ... + x_N) / sqrt(variance_sum) over the first
// N variables of a model. Variables are named X1..XN in position order.
struct SumSpec {
  std::shared_ptr<const MomentFunctional> model;
  std::vector<Symbol> names;
  std::vector<Rational> variances;
  IndexPattern pattern = IndexPattern::Equality;
  bool exchangeable = false;  // identical marginals: enables pattern counting
  std::string label;

  int size() const { return static_cast<int>(names.size()); }
  Rational variance_sum() const;
};

SumSpec group_sum_spec(int N);
SumSpec free_semicircle_sum_spec(int N, const Rational& variance);
SumSpec free_sum_spec(std::vector<VariableSpec> specs, bool exchangeable);
SumSpec classical_sum_spec(std::vector<VariableSpec> specs, bool exchangeable);

// Sum over all index tuples (i_1..i_m) of E(x_{i_1} ... x_{i_m}); the
// unnormalized m-th moment of x_1 + ... + x_N. For exchangeable specs the
// enumeration runs over canonical index patterns with exact multiplicities,
// so the cost is independent of N.
Rational raw_sum_moment(const SumSpec& spec, unsigned m);

// Same value by plain enumeration of all N^m tuples.
Rational raw_sum_moment_direct(const SumSpec& spec, unsigned m);

// E(S^m). Even moments are exact rationals; an odd moment is returned only
// when its raw sum vanishes (otherwise the sqrt normalization would be
// irrational and a std::domain_error is thrown).
Rational sum_moment(const SumSpec& spec, unsigned m);

struct SwapDerivatives {
  Rational first_x, first_y;    // E f'_{X_k}(Z_k), E f'_{Y_k}(Z_k)
  Rational second_x, second_y;  // E f''_{X_k}(Z_k), E f''_{Y_k}(Z_k)
  bool first_vanish() const { return first_x == 0 && first_y == 0; }
  bool second_match() const { return second_x == second_y; }
};

// The swap at position k: Z_k = X_1+...+X_{k-1}+Y_{k+1}+...+Y_N with free
// semicircle Y_i matching the X_i variances. Evaluates the expectations of
// the first and second directional derivatives of f = x^m at Z_k in the
// directions X_k and Y_k.
SwapDerivatives swap_derivative_check(const SumSpec& spec, int k, unsigned m);

// E f(Z_k + X_k) - E f(Z_k + Y_k) for f = x^m, exact, by direct expansion.
Rational swap_difference(const SumSpec& spec, int k, unsigned m);

// The same difference through the Taylor split f(Z) + f' + f''/2 + tail;
// used as an independent route in cross-checks.
Rational swap_difference_tail(const SumSpec& spec, int k, unsigned m);

struct MomentBound {
  int r = 0;
  bool via_lyapunov = false;  // odd r is certified through the even r+1 moment
  Rational moment;            // E(Z^r) for even r, E(Z^{r+1}) for odd r
  Rational bound;             // (r/2)^r mu_{r^2}, resp. the r+1 variant
  double lhs = 0, rhs = 0;    // reported sides (fractional powers when odd)
  bool holds = false;
};

// Z = (x_1 + ... + x_N)/sqrt(N), unnormalized variables; mu[k-1] is a
// uniform bound on E|x_i|^k. Even r compares E(Z^r) <= (r/2)^r mu_{r^2}
// exactly; odd r certifies the Lyapunov-interpolated bound through the
// exact even inequality at r+1.
MomentBound moment_bound_check(const SumSpec& spec, int r,
                               const std::vector<Rational>& mu);

// Uniform absolute-moment bounds for X_i = f_i + f_i^{-1}: exact central
// binomials at even orders, the even-ceiling interpolation at odd orders.
std::vector<Rational> group_absolute_moment_bounds(unsigned max_order);

struct ExperimentRow {
  int N = 0;
  unsigned m = 0;
  Rational moment;
  Rational target;
  Rational error;
};

struct RateFit {
  unsigned m = 0;
  double alpha = 0;        // least-squares exponent of error ~ C N^-alpha; NaN if undetermined
  double c_hat = 0;        // error(N_min) * sqrt(N_min)
  Rational c_hat_squared;  // exact square used for the domination test
  bool nonincreasing = false;
  bool dominated = false;  // error(N) <= c_hat / sqrt(N) for every N, exactly
};

struct ExperimentReport {
  std::string label;
  unsigned m_max = 0;
  std::vector<ExperimentRow> rows;
  std::vector<RateFit> fits;

  std::string to_csv() const;
  std::string to_json() const;
  std::string to_gnuplot() const;
};

// Moment table |E(S_N^m) - semicircle target| over the given specs (one per
// N), with per-degree rate fits. The fitted exponent is reported, never
// asserted.
ExperimentReport convergence_experiment(const std::vector<SumSpec>& specs,
                                        unsigned m_max);

}  // namespace nclt
