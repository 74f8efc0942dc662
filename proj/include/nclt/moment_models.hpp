#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nclt/ncpoly.hpp"

namespace nclt {

// Marginal-moment description of one variable: moments[p-1] = E(X^p).
struct VariableSpec {
  Symbol name;
  std::vector<Rational> moments;

  static VariableSpec from_moments(Symbol name, std::vector<Rational> moments);
  // Semicircle of the given variance: odd moments vanish, order-2p moments
  // are Catalan(p) * variance^p.
  static VariableSpec semicircle(Symbol name, const Rational& variance,
                                 unsigned max_order);

  // p = 0 returns 1; throws std::out_of_range past the stored table.
  Rational moment(unsigned p) const;
  unsigned max_order() const { return static_cast<unsigned>(moments.size()); }
  bool centered() const { return moments.empty() || moments[0] == 0; }
};

// Expectation functional on words in a fixed set of named variables.
// Implementations are immutable evaluators; internal memo caches are safe
// for concurrent use.
class MomentFunctional {
 public:
  virtual ~MomentFunctional() = default;

  virtual const std::vector<Symbol>& variables() const = 0;
  virtual Rational evaluate(const Monomial& word) const = 0;

  // Same as evaluate, with letters given as indices into variables().
  // Overridden by models with a faster native path.
  virtual Rational evaluate_ids(const std::vector<std::int32_t>& letters) const;

  // Index of a variable in variables(); throws on unknown names.
  std::int32_t variable_id(const Symbol& name) const;

  Rational evaluate_poly(const NCPolynomial& f) const;
  Rational moment_of(const Symbol& x, unsigned p) const;
};

// Free variables with the given marginals: the unique tracial functional
// under which the variables are freely independent. Mixed moments are
// computed by the centering recursion on maximal same-variable blocks.
std::shared_ptr<const MomentFunctional> free_model(std::vector<VariableSpec> specs);

// Commuting independent variables: a word evaluates to the product of the
// per-variable marginal moments of the collected exponents.
std::shared_ptr<const MomentFunctional> classical_model(std::vector<VariableSpec> specs);

// Extends a base functional with semicircle variables that are free from
// each other and from everything in the base algebra. Throws on a name
// clash with the base universe.
std::shared_ptr<const MomentFunctional> adjoin_free(
    std::shared_ptr<const MomentFunctional> base,
    std::vector<VariableSpec> semicircle_specs);

// The single mixed moment of free variables; convenience over free_model.
Rational free_moment(const std::vector<VariableSpec>& specs, const Monomial& word);

// Deterministic generic centered marginals, distinct across variables;
// used as the default spec set for the free and classical models.
std::vector<VariableSpec> generic_centered_specs(unsigned count, unsigned max_order);

// ---------------------------------------------------------------------------
// Moment-condition checkers

struct ConditionAOptions {
  bool clause1 = true;
  bool clause2 = true;
  bool clause3 = true;
  // Also test every rotation of each clause instance. The written clauses
  // put X_k leftmost; rotations are an optional extension via traciality.
  bool cyclic = false;
};

struct ConditionAViolation {
  std::string clause;  // "A1", "A2", "A3"
  Monomial word;
  Rational lhs;
  Rational rhs;
};

struct ConditionAReport {
  std::vector<Symbol> vars;
  unsigned max_degree = 0;
  std::size_t instances_checked = 0;
  std::vector<ConditionAViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};

// Enumerates the clause shapes over the ordered variables up to the given
// total degree and records every violation with both sides. Requires
// max_degree >= 2.
ConditionAReport check_condition_A(const MomentFunctional& E,
                                   const std::vector<Symbol>& vars,
                                   unsigned max_degree,
                                   const ConditionAOptions& options = {});

struct FreenessViolation {
  // the alternating word: centered factors X^p - E(X^p)
  std::vector<std::pair<Symbol, unsigned>> factors;
  Rational value;
  std::string word_str() const;  // plain word of the uncentered powers
};

// Checks E = 0 on every alternating product of centered powers with total
// degree <= max_degree; returns the nonzero cases.
std::vector<FreenessViolation> check_freeness(const MomentFunctional& E,
                                              const std::vector<Symbol>& vars,
                                              unsigned max_degree);

std::string freeness_to_json(const std::vector<FreenessViolation>& violations,
                             unsigned max_degree);

}  // namespace nclt
