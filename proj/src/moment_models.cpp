#include "nclt/moment_models.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

#include "nclt/memo.hpp"

namespace nclt {

// ---------------------------------------------------------------------------
// VariableSpec

VariableSpec VariableSpec::from_moments(Symbol name, std::vector<Rational> moments) {
  for (auto& m : moments) m = canonical(m);
  return VariableSpec{std::move(name), std::move(moments)};
}

VariableSpec VariableSpec::semicircle(Symbol name, const Rational& variance,
                                      unsigned max_order) {
  const Rational v = canonical(variance);
  std::vector<Rational> moments(max_order, Rational(0));
  for (unsigned p = 2; p <= max_order; p += 2)
    moments[p - 1] = catalan(p / 2) * rational_pow(v, p / 2);
  return VariableSpec{std::move(name), std::move(moments)};
}

Rational VariableSpec::moment(unsigned p) const {
  if (p == 0) return 1;
  if (p > moments.size())
    throw std::out_of_range("marginal of " + name + " missing order " + std::to_string(p));
  return moments[p - 1];
}

// ---------------------------------------------------------------------------
// MomentFunctional

Rational MomentFunctional::evaluate_ids(const std::vector<std::int32_t>& letters) const {
  const auto& names = variables();
  std::vector<Symbol> word;
  word.reserve(letters.size());
  for (auto id : letters) word.push_back(names.at(static_cast<std::size_t>(id)));
  return evaluate(Monomial(std::move(word)));
}

std::int32_t MomentFunctional::variable_id(const Symbol& name) const {
  const auto& names = variables();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown variable: " + name);
  return static_cast<std::int32_t>(it - names.begin());
}

Rational MomentFunctional::evaluate_poly(const NCPolynomial& f) const {
  Rational total = 0;
  for (const auto& [m, c] : f.terms()) total += c * evaluate(m);
  return total;
}

Rational MomentFunctional::moment_of(const Symbol& x, unsigned p) const {
  return evaluate(Monomial::power(x, p));
}

namespace {

// ---------------------------------------------------------------------------
// Free product of component algebras.
//
// Component >= 0 is a single variable with given marginals; component -1 is
// a base algebra whose joint moments come from a wrapped functional. A word
// splits into maximal blocks of equal component; centering every block and
// using that an alternating product of centered blocks has expectation zero
// yields
//
//   E(B_1...B_n) = sum over nonempty S of (-1)^(|S|+1) prod_{i in S} E(B_i)
//                  * E(word with the S blocks deleted),
//
// where deleting blocks merges newly adjacent same-component neighbours.
// The recursion terminates because the block count strictly decreases.
class FreeProductFunctional final : public MomentFunctional {
 public:
  FreeProductFunctional(std::shared_ptr<const MomentFunctional> base,
                        std::vector<VariableSpec> atoms)
      : base_(std::move(base)), atoms_(std::move(atoms)) {
    if (base_) {
      names_ = base_->variables();
      base_count_ = static_cast<std::int32_t>(names_.size());
    }
    for (const auto& a : atoms_) names_.push_back(a.name);
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (!id_of_.emplace(names_[i], static_cast<std::int32_t>(i)).second)
        throw std::invalid_argument("duplicate variable name: " + names_[i]);
  }

  const std::vector<Symbol>& variables() const override { return names_; }

  Rational evaluate(const Monomial& word) const override {
    std::vector<std::int32_t> ids;
    ids.reserve(word.degree());
    for (const auto& x : word.letters()) {
      auto it = id_of_.find(x);
      if (it == id_of_.end()) throw std::invalid_argument("unknown variable: " + x);
      ids.push_back(it->second);
    }
    return evaluate_ids(ids);
  }

  Rational evaluate_ids(const std::vector<std::int32_t>& letters) const override {
    std::vector<Block> blocks;
    for (auto id : letters) {
      const int comp = id < base_count_ ? -1 : static_cast<int>(id - base_count_);
      if (blocks.empty() || blocks.back().comp != comp) blocks.push_back({comp, {}});
      blocks.back().letters.push_back(id);
    }
    return eval_blocks(blocks);
  }

 private:
  struct Block {
    int comp;  // -1 = base algebra, otherwise atom index
    std::vector<std::int32_t> letters;
  };

  Rational block_mean(const Block& b) const {
    if (b.comp >= 0)
      return atoms_[static_cast<std::size_t>(b.comp)].moment(
          static_cast<unsigned>(b.letters.size()));
    return base_->evaluate_ids(b.letters);
  }

  static std::vector<std::int32_t> key_of(const std::vector<Block>& blocks) {
    std::vector<std::int32_t> key;
    for (const auto& b : blocks) {
      key.push_back(b.comp);
      key.push_back(static_cast<std::int32_t>(b.letters.size()));
      key.insert(key.end(), b.letters.begin(), b.letters.end());
    }
    return key;
  }

  Rational eval_blocks(const std::vector<Block>& blocks) const {
    if (blocks.empty()) return 1;
    if (blocks.size() == 1) return block_mean(blocks.front());

    auto key = key_of(blocks);
    if (auto hit = memo_.find(key)) return *hit;

    std::vector<Rational> means(blocks.size());
    std::vector<std::size_t> candidates;  // blocks with nonzero mean
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      means[i] = block_mean(blocks[i]);
      if (means[i] != 0) candidates.push_back(i);
    }

    Rational total = 0;
    const std::size_t c = candidates.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << c); ++mask) {
      Rational coef = 1;
      std::vector<bool> removed(blocks.size(), false);
      int picked = 0;
      for (std::size_t j = 0; j < c; ++j) {
        if (!(mask >> j & 1)) continue;
        removed[candidates[j]] = true;
        coef *= means[candidates[j]];
        ++picked;
      }
      if (picked % 2 == 0) coef = -coef;

      std::vector<Block> rest;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (removed[i]) continue;
        if (!rest.empty() && rest.back().comp == blocks[i].comp)
          rest.back().letters.insert(rest.back().letters.end(),
                                     blocks[i].letters.begin(),
                                     blocks[i].letters.end());
        else
          rest.push_back(blocks[i]);
      }
      total += coef * eval_blocks(rest);
    }

    memo_.insert(std::move(key), total);
    return total;
  }

  std::shared_ptr<const MomentFunctional> base_;
  std::vector<VariableSpec> atoms_;
  std::vector<Symbol> names_;
  std::map<Symbol, std::int32_t> id_of_;
  std::int32_t base_count_ = 0;
  mutable Memo<std::vector<std::int32_t>, Rational, IntVecHash> memo_;
};

class ClassicalFunctional final : public MomentFunctional {
 public:
  explicit ClassicalFunctional(std::vector<VariableSpec> specs)
      : specs_(std::move(specs)) {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      names_.push_back(specs_[i].name);
      if (!id_of_.emplace(specs_[i].name, static_cast<std::int32_t>(i)).second)
        throw std::invalid_argument("duplicate variable name: " + specs_[i].name);
    }
  }

  const std::vector<Symbol>& variables() const override { return names_; }

  Rational evaluate(const Monomial& word) const override {
    std::map<std::int32_t, unsigned> exponents;
    for (const auto& x : word.letters()) {
      auto it = id_of_.find(x);
      if (it == id_of_.end()) throw std::invalid_argument("unknown variable: " + x);
      ++exponents[it->second];
    }
    Rational out = 1;
    for (const auto& [id, p] : exponents)
      out *= specs_[static_cast<std::size_t>(id)].moment(p);
    return out;
  }

 private:
  std::vector<VariableSpec> specs_;
  std::vector<Symbol> names_;
  std::map<Symbol, std::int32_t> id_of_;
};

}  // namespace

std::shared_ptr<const MomentFunctional> free_model(std::vector<VariableSpec> specs) {
  return std::make_shared<FreeProductFunctional>(nullptr, std::move(specs));
}

std::shared_ptr<const MomentFunctional> classical_model(std::vector<VariableSpec> specs) {
  return std::make_shared<ClassicalFunctional>(std::move(specs));
}

std::shared_ptr<const MomentFunctional> adjoin_free(
    std::shared_ptr<const MomentFunctional> base,
    std::vector<VariableSpec> semicircle_specs) {
  if (!base) throw std::invalid_argument("adjoin_free: null base");
  return std::make_shared<FreeProductFunctional>(std::move(base),
                                                 std::move(semicircle_specs));
}

Rational free_moment(const std::vector<VariableSpec>& specs, const Monomial& word) {
  return free_model(specs)->evaluate(word);
}

std::vector<VariableSpec> generic_centered_specs(unsigned count, unsigned max_order) {
  std::vector<VariableSpec> specs;
  for (unsigned i = 1; i <= count; ++i) {
    std::vector<Rational> moments;
    moments.emplace_back(0);
    for (unsigned p = 2; p <= max_order; ++p) {
      const long num = static_cast<long>(i + 2 * p) + (p % 2 ? -3 : 4);
      const long den = 1 + static_cast<long>((i + p) % 3);
      moments.push_back(canonical(Rational(num, den)));
    }
    specs.push_back(VariableSpec::from_moments("X" + std::to_string(i), std::move(moments)));
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Condition A checker

namespace {

// Calls fn on every tuple in pool^length.
template <class Fn>
void for_each_tuple(const std::vector<Symbol>& pool, unsigned length, Fn&& fn) {
  if (length == 0) {
    fn(std::vector<Symbol>{});
    return;
  }
  if (pool.empty()) return;
  std::vector<std::size_t> odo(length, 0);
  while (true) {
    std::vector<Symbol> tuple(length);
    for (unsigned i = 0; i < length; ++i) tuple[i] = pool[odo[i]];
    fn(tuple);
    std::size_t i = length;
    while (i > 0) {
      if (++odo[i - 1] < pool.size()) break;
      odo[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
}

std::vector<Symbol> rotated(const std::vector<Symbol>& w, std::size_t by) {
  std::vector<Symbol> out(w.begin() + static_cast<std::ptrdiff_t>(by), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(by));
  return out;
}

}  // namespace

ConditionAReport check_condition_A(const MomentFunctional& E,
                                   const std::vector<Symbol>& vars,
                                   unsigned max_degree,
                                   const ConditionAOptions& options) {
  if (max_degree < 2) throw std::invalid_argument("condition A needs max_degree >= 2");
  ConditionAReport report;
  report.vars = vars;
  report.max_degree = max_degree;

  auto record = [&](const char* clause, const std::vector<Symbol>& word,
                    const Rational& rhs) {
    const auto run = [&](const std::vector<Symbol>& w) {
      ++report.instances_checked;
      Rational lhs = E.evaluate(Monomial(w));
      if (lhs != rhs) report.violations.push_back({clause, Monomial(w), lhs, rhs});
    };
    run(word);
    if (options.cyclic)
      for (std::size_t t = 1; t < word.size(); ++t) run(rotated(word, t));
  };

  for (std::size_t kpos = 0; kpos < vars.size(); ++kpos) {
    const Symbol& xk = vars[kpos];

    // A1: X_k leftmost, no other occurrence of X_k anywhere.
    if (options.clause1) {
      std::vector<Symbol> others;
      for (std::size_t j = 0; j < vars.size(); ++j)
        if (j != kpos) others.push_back(vars[j]);
      for (unsigned r = 0; r + 1 <= max_degree; ++r)
        for_each_tuple(others, r, [&](const std::vector<Symbol>& tuple) {
          std::vector<Symbol> word{xk};
          word.insert(word.end(), tuple.begin(), tuple.end());
          record("A1", word, Rational(0));
        });
    }

    if (kpos == 0) continue;
    const std::vector<Symbol> lower(vars.begin(),
                                    vars.begin() + static_cast<std::ptrdiff_t>(kpos));
    const Rational xk2 = E.moment_of(xk, 2);

    // A2: X_k^2 leftmost, the rest strictly lower variables.
    if (options.clause2) {
      for (unsigned r = 0; r + 2 <= max_degree; ++r)
        for_each_tuple(lower, r, [&](const std::vector<Symbol>& tuple) {
          std::vector<Symbol> word{xk, xk};
          word.insert(word.end(), tuple.begin(), tuple.end());
          record("A2", word, xk2 * E.evaluate(Monomial(tuple)));
        });
    }

    // A3: two X_k letters separated by lower-variable words; the expectation
    // splits at the X_k positions.
    if (options.clause3) {
      for (unsigned r = 0; r + 2 <= max_degree; ++r)
        for_each_tuple(lower, r, [&](const std::vector<Symbol>& tuple) {
          for (unsigned p = 0; p <= r; ++p) {
            std::vector<Symbol> left(tuple.begin(), tuple.begin() + p);
            std::vector<Symbol> right(tuple.begin() + p, tuple.end());
            std::vector<Symbol> word{xk};
            word.insert(word.end(), left.begin(), left.end());
            word.push_back(xk);
            word.insert(word.end(), right.begin(), right.end());
            record("A3", word,
                   xk2 * E.evaluate(Monomial(left)) * E.evaluate(Monomial(right)));
          }
        });
    }
  }
  return report;
}

std::string ConditionAReport::to_json() const {
  nlohmann::ordered_json j;
  j["vars"] = vars;
  j["max_degree"] = max_degree;
  j["instances_checked"] = instances_checked;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations) {
    nlohmann::ordered_json item;
    item["clause"] = v.clause;
    item["word"] = v.word.str();
    item["lhs"] = rational_to_string(v.lhs);
    item["rhs"] = rational_to_string(v.rhs);
    j["violations"].push_back(item);
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Freeness checker

std::string FreenessViolation::word_str() const {
  std::vector<Symbol> letters;
  for (const auto& [x, p] : factors)
    for (unsigned i = 0; i < p; ++i) letters.push_back(x);
  return Monomial(std::move(letters)).str();
}

namespace {

// Expectation of a product of centered powers prod_i (X_{v_i}^{p_i} - mu_i):
// expand the binomial product and evaluate each plain word.
Rational centered_product_expectation(
    const MomentFunctional& E,
    const std::vector<std::pair<Symbol, unsigned>>& factors) {
  const std::size_t m = factors.size();
  std::vector<Rational> mu(m);
  for (std::size_t i = 0; i < m; ++i)
    mu[i] = E.moment_of(factors[i].first, factors[i].second);

  Rational total = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Rational coef = 1;
    std::vector<Symbol> letters;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) {
        for (unsigned t = 0; t < factors[i].second; ++t)
          letters.push_back(factors[i].first);
      } else {
        coef *= -mu[i];
      }
    }
    if (coef == 0) continue;
    total += coef * E.evaluate(Monomial(std::move(letters)));
  }
  return total;
}

}  // namespace

std::vector<FreenessViolation> check_freeness(const MomentFunctional& E,
                                              const std::vector<Symbol>& vars,
                                              unsigned max_degree) {
  if (max_degree < 2) throw std::invalid_argument("freeness check needs max_degree >= 2");
  std::vector<FreenessViolation> out;
  std::vector<std::pair<Symbol, unsigned>> factors;
  unsigned used = 0;

  auto visit = [&](auto&& self) -> void {
    if (!factors.empty()) {
      Rational value = centered_product_expectation(E, factors);
      if (value != 0) out.push_back({factors, value});
    }
    for (const auto& v : vars) {
      if (!factors.empty() && factors.back().first == v) continue;
      for (unsigned p = 1; used + p <= max_degree; ++p) {
        factors.emplace_back(v, p);
        used += p;
        self(self);
        used -= p;
        factors.pop_back();
      }
    }
  };
  visit(visit);
  return out;
}

std::string freeness_to_json(const std::vector<FreenessViolation>& violations,
                             unsigned max_degree) {
  nlohmann::ordered_json j;
  j["max_degree"] = max_degree;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations) {
    nlohmann::ordered_json item;
    item["word"] = v.word_str();
    item["factors"] = nlohmann::ordered_json::array();
    for (const auto& [x, p] : v.factors) {
      nlohmann::ordered_json f = nlohmann::ordered_json::array();
      f.push_back(x);
      f.push_back(p);
      item["factors"].push_back(f);
    }
    item["value"] = rational_to_string(v.value);
    j["violations"].push_back(item);
  }
  return j.dump(2);
}

}  // namespace nclt
