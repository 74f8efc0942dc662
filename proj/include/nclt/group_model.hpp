#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nclt/moment_models.hpp"

namespace nclt {

// One generator occurrence f_k or f_k^-1.
struct GroupLetter {
  int index;  // k >= 1
  int sign;   // +1 or -1

  GroupLetter inverse() const { return {index, -sign}; }
  friend bool operator==(const GroupLetter&, const GroupLetter&) = default;
  friend auto operator<=>(const GroupLetter&, const GroupLetter&) = default;
};

// A word over the generators. Construction does not reduce; reduction is
// explicit so that relators and seam checks can inspect raw letter runs.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<GroupLetter> letters);

  // "f2.f1^-1"; "e" (or "") denotes the empty word.
  static GroupWord parse(std::string_view text);
  std::string str() const;

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<GroupLetter>& letters() const { return letters_; }
  int max_index() const;  // 0 for the empty word

  GroupWord inverse() const;
  GroupWord operator*(const GroupWord& rhs) const;  // concatenation, unreduced

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
  // length, then lexicographic; a deterministic total order for sets
  friend bool operator<(const GroupWord& a, const GroupWord& b);

 private:
  std::vector<GroupLetter> letters_;
};

// Cancels every adjacent f_k f_k^-1 pair; the result is the unique reduced
// form and never longer than the input.
GroupWord free_reduce(const GroupWord& w);

// Strips conjugating prefix/suffix pairs off the reduced form. Preserves
// triviality in any quotient group.
GroupWord cyclic_reduce(const GroupWord& w);

bool is_reduced(const GroupWord& w);
bool is_cyclically_reduced(const GroupWord& w);

// Exponent sum mod 3 per generator occurring in w, residues in {0,1,2}.
// Defining relators shift each exponent sum by multiples of 3, so any
// nonzero residue certifies that w is not trivial.
std::map<int, int> mod3_degrees(const GroupWord& w);

// The symmetrized defining relators (f_k f_{k-1})^3 for 2 <= k <= kmax:
// closed under inverses and cyclic rotations, each of length 6, letters
// alternating between the indices k and k-1.
class RelatorSet {
 public:
  static RelatorSet build(int kmax);  // throws if kmax < 2

  int kmax() const { return kmax_; }
  const std::vector<GroupWord>& relators() const { return relators_; }
  bool contains(const GroupWord& w) const { return set_.count(w) > 0; }

 private:
  int kmax_ = 0;
  std::vector<GroupWord> relators_;
  std::set<GroupWord> set_;
};

// Closure of the given words under inverse and cyclic rotation of the
// cyclically reduced forms; sorted and deduplicated.
std::vector<GroupWord> symmetrize(const std::vector<GroupWord>& seeds);

struct PieceReport {
  // common prefixes of two distinct relators, with all their prefixes
  std::vector<GroupWord> pieces;
  // pieces that appear only once the relator family for kmax+1 is
  // instantiated; at the truncation boundary f_kmax has a single relator
  // family starting with it, so it is reported separately
  std::vector<GroupWord> boundary;
  std::size_t max_piece_length = 0;
};

PieceReport compute_pieces(const RelatorSet& relators);

// C'(lambda): every piece prefix b of a relator r satisfies |b| < lambda*|r|,
// compared exactly in rational arithmetic.
bool check_metric(const RelatorSet& relators, const Rational& lambda);

// Condition T over an arbitrary word list: for every triple r1,r2,r3 with
// r2 != r1^-1 and r3 != r2^-1, at least one of r1r2, r2r3, r3r1 concatenates
// without cancellation at the seam.
bool check_triangle(const std::vector<GroupWord>& relators);

enum class Verdict { Trivial, Nontrivial };

struct RewriteStep {
  std::size_t position;  // start offset in the cyclic word being rewritten
  GroupWord relator;
  GroupWord replacement;
};

struct Classification {
  Verdict verdict = Verdict::Nontrivial;
  GroupWord cyclic_core;  // cyclically reduced form of the input
  std::vector<RewriteStep> trace;
  std::string to_json() const;
};

// Dehn's algorithm: reduce, shortcut on mod-3 residues, then repeatedly
// replace a cyclic subword s with |s| >= 4 that is a relator prefix r = st
// by t^-1. Sound and complete for this relator family by Greendlinger's
// lemma under C'(1/4) and T; total on all inputs.
Classification dehn_classify(const GroupWord& w);

// Verdict-only classification with a process-wide cache.
Verdict classify_word(const GroupWord& w);

// Finite rational combination of reduced words; products expand through
// concatenation followed by free reduction.
class GroupAlgebraElement {
 public:
  GroupAlgebraElement() = default;  // zero
  static GroupAlgebraElement unit();
  static GroupAlgebraElement from_word(const GroupWord& w, const Rational& c = 1);

  const std::map<GroupWord, Rational>& terms() const { return terms_; }

  GroupAlgebraElement operator+(const GroupAlgebraElement& rhs) const;
  GroupAlgebraElement operator-(const GroupAlgebraElement& rhs) const;
  GroupAlgebraElement operator*(const GroupAlgebraElement& rhs) const;
  GroupAlgebraElement operator*(const Rational& c) const;

  // On rational coefficients conjugation is the identity, so the adjoint
  // just maps the coefficient of g to g^-1.
  GroupAlgebraElement adjoint() const;

  friend bool operator==(const GroupAlgebraElement&, const GroupAlgebraElement&) = default;

 private:
  void add(const GroupWord& w, const Rational& c);
  std::map<GroupWord, Rational> terms_;
};

// E(h) = coefficient mass on words that equal the identity in the group.
Rational expectation(const GroupAlgebraElement& h);

// X_i = f_i + f_i^-1, the self-adjoint generator variable.
GroupAlgebraElement group_variable(int i);

// Moment functional over X_1..X_n realized inside the group algebra.
// Evaluation expands the product over the 2^degree sign choices and counts
// the trivial words; results are cached process-wide by index pattern.
class GroupMomentFunctional final : public MomentFunctional {
 public:
  explicit GroupMomentFunctional(int nvars);
  const std::vector<Symbol>& variables() const override { return names_; }
  Rational evaluate(const Monomial& word) const override;
  Rational evaluate_ids(const std::vector<std::int32_t>& letters) const override;

 private:
  int nvars_;
  std::vector<Symbol> names_;
};

// E(X_{i_1} ... X_{i_m}) for 1-based generator indices.
Rational group_monomial_expectation(const std::vector<int>& indices);

}  // namespace nclt
