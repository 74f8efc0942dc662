#include "nclt/clt_harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "nclt/memo.hpp"

namespace nclt {

Rational semicircle_moment(unsigned m) {
  if (m % 2 == 1) return 0;
  return catalan(m / 2);
}

Rational SumSpec::variance_sum() const {
  Rational total = 0;
  for (const auto& v : variances) total += v;
  return total;
}

namespace {

std::vector<Symbol> position_names(int n) {
  std::vector<Symbol> names;
  for (int i = 1; i <= n; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

Rational centered_variance(const VariableSpec& spec) {
  if (!spec.centered())
    throw std::invalid_argument("sum spec requires centered variables: " + spec.name);
  return spec.moment(2);
}

// normalized value = raw / s2^(m/2); odd m demands a vanishing raw sum
Rational normalize_by_power(const Rational& raw, unsigned m, const Rational& s2) {
  if (m % 2 == 0) return raw / rational_pow(s2, m / 2);
  if (raw == 0) return 0;
  throw std::domain_error("odd-degree value with nonzero raw sum is irrational");
}

}  // namespace

SumSpec group_sum_spec(int N) {
  if (N < 1) throw std::invalid_argument("need N >= 1");
  SumSpec spec;
  spec.model = std::make_shared<GroupMomentFunctional>(N);
  spec.names = position_names(N);
  spec.variances.assign(static_cast<std::size_t>(N), Rational(2));
  spec.pattern = IndexPattern::Adjacency;
  spec.exchangeable = true;
  spec.label = "group";
  return spec;
}

SumSpec free_semicircle_sum_spec(int N, const Rational& variance) {
  if (N < 1) throw std::invalid_argument("need N >= 1");
  std::vector<VariableSpec> specs;
  for (const auto& name : position_names(N))
    specs.push_back(VariableSpec::semicircle(name, variance, 16));
  SumSpec spec;
  spec.model = free_model(specs);
  spec.names = position_names(N);
  spec.variances.assign(static_cast<std::size_t>(N), canonical(variance));
  spec.pattern = IndexPattern::Equality;
  spec.exchangeable = true;
  spec.label = "free-semicircle";
  return spec;
}

SumSpec free_sum_spec(std::vector<VariableSpec> specs, bool exchangeable) {
  SumSpec spec;
  spec.names.clear();
  for (const auto& s : specs) {
    spec.names.push_back(s.name);
    spec.variances.push_back(centered_variance(s));
  }
  spec.model = free_model(std::move(specs));
  spec.pattern = IndexPattern::Equality;
  spec.exchangeable = exchangeable;
  spec.label = "free";
  return spec;
}

SumSpec classical_sum_spec(std::vector<VariableSpec> specs, bool exchangeable) {
  SumSpec spec;
  for (const auto& s : specs) {
    spec.names.push_back(s.name);
    spec.variances.push_back(centered_variance(s));
  }
  spec.model = classical_model(std::move(specs));
  spec.pattern = IndexPattern::Equality;
  spec.exchangeable = exchangeable;
  spec.label = "classical";
  return spec;
}

// ---------------------------------------------------------------------------
// Sum moments by canonical index patterns.
//
// A tuple (i_1..i_m) is described by the surjection onto the ranks of its
// sorted distinct values plus, for adjacency-sensitive models, the gap kind
// between consecutive values (exactly 1, or >= 2). Tuples sharing that
// description have equal expectations, and their number has a closed form,
// so the enumeration cost does not grow with N.

namespace {

// number of strictly increasing value choices v_1 < ... < v_s in [1, N]
// realizing the given gap kinds (1 = adjacent, 2 = spread)
Rational gap_pattern_count(int N, const std::vector<int>& gaps) {
  const int s = static_cast<int>(gaps.size()) + 1;
  int spread = 0;
  for (int g : gaps)
    if (g == 2) ++spread;
  const int slack = N - (s + spread);  // minimal span is s + spread
  if (slack < 0) return 0;
  return binomial(static_cast<unsigned>(slack + spread + 1),
                  static_cast<unsigned>(spread + 1));
}

// restricted-growth strings: visit(blocks) for every set partition of [m],
// where blocks[j] is the first-occurrence block id of position j
template <class Fn>
void for_each_partition(unsigned m, Fn&& visit) {
  std::vector<int> rgs(m, 0);
  auto rec = [&](auto&& self, unsigned pos, int used) -> void {
    if (pos == m) {
      visit(rgs, used);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      rgs[pos] = b;
      self(self, pos + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
}

class PatternAccumulator {
 public:
  PatternAccumulator(const SumSpec& spec, unsigned m) : spec_(spec), m_(m) {}

  Rational run() {
    if (m_ == 0) return 1;
    Rational total = 0;
    for_each_partition(m_, [&](const std::vector<int>& rgs, int s) {
      // ranks = all bijections block id -> sorted-value rank
      std::vector<int> rank(static_cast<std::size_t>(s));
      for (int i = 0; i < s; ++i) rank[static_cast<std::size_t>(i)] = i;
      do {
        if (spec_.pattern == IndexPattern::Equality) {
          const Rational count = binomial(static_cast<unsigned>(spec_.size()),
                                          static_cast<unsigned>(s));
          if (count != 0) total += count * evaluate(rgs, rank, {});
        } else {
          std::vector<int> gaps(static_cast<std::size_t>(s) - 1, 1);
          // odometer over gap kinds in {1,2}^(s-1)
          while (true) {
            const Rational count = gap_pattern_count(spec_.size(), gaps);
            if (count != 0) total += count * evaluate(rgs, rank, gaps);
            std::size_t i = gaps.size();
            while (i > 0 && gaps[i - 1] == 2) {
              gaps[i - 1] = 1;
              --i;
            }
            if (i == 0) break;
            gaps[i - 1] = 2;
          }
        }
      } while (std::next_permutation(rank.begin(), rank.end()));
    });
    return total;
  }

 private:
  Rational evaluate(const std::vector<int>& rgs, const std::vector<int>& rank,
                    const std::vector<int>& gaps) {
    // canonical value of rank t: 1 + sum of the first t gaps (1s when absent)
    const int s = static_cast<int>(rank.size());
    std::vector<std::int32_t> value(static_cast<std::size_t>(s));
    int v = 1;
    for (int t = 0; t < s; ++t) {
      value[static_cast<std::size_t>(t)] = v;
      if (t + 1 < s) v += gaps.empty() ? 1 : gaps[static_cast<std::size_t>(t)];
    }
    std::vector<std::int32_t> ids(m_);
    for (unsigned j = 0; j < m_; ++j)
      ids[j] = value[static_cast<std::size_t>(
                  rank[static_cast<std::size_t>(rgs[j])])] -
               1;
    if (auto hit = cache_.find(ids)) return *hit;
    Rational out = spec_.model->evaluate_ids(ids);
    cache_.insert(std::move(ids), out);
    return out;
  }

  const SumSpec& spec_;
  unsigned m_;
  Memo<std::vector<std::int32_t>, Rational, IntVecHash> cache_;
};

}  // namespace

Rational raw_sum_moment(const SumSpec& spec, unsigned m) {
  if (!spec.model) throw std::invalid_argument("sum spec has no model");
  if (!spec.exchangeable) return raw_sum_moment_direct(spec, m);
  return PatternAccumulator(spec, m).run();
}

Rational raw_sum_moment_direct(const SumSpec& spec, unsigned m) {
  if (!spec.model) throw std::invalid_argument("sum spec has no model");
  if (m == 0) return 1;
  const int N = spec.size();
  std::vector<std::int32_t> ids(m, 0);
  Rational total = 0;
  while (true) {
    total += spec.model->evaluate_ids(ids);
    std::size_t i = m;
    while (i > 0) {
      if (++ids[i - 1] < N) break;
      ids[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return total;
}

Rational sum_moment(const SumSpec& spec, unsigned m) {
  return normalize_by_power(raw_sum_moment(spec, m), m, spec.variance_sum());
}

// ---------------------------------------------------------------------------
// Lindeberg swap

namespace {

struct SwapContext {
  std::shared_ptr<const MomentFunctional> hybrid;
  std::vector<std::int32_t> z_ids;  // X_1..X_{k-1}, Y_{k+1}..Y_N
  std::int32_t xk_id = 0;
  std::int32_t yk_id = 0;
};

std::shared_ptr<const SwapContext> swap_context(const SumSpec& spec, int k) {
  if (k < 1 || k > spec.size()) throw std::invalid_argument("swap position out of range");

  static std::mutex mu;
  static std::map<std::pair<const MomentFunctional*, int>,
                  std::shared_ptr<const SwapContext>>
      cache;
  const auto key = std::make_pair(spec.model.get(), k);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  auto ctx = std::make_shared<SwapContext>();
  std::vector<VariableSpec> adjoined;
  for (int i = k; i <= spec.size(); ++i)
    adjoined.push_back(VariableSpec::semicircle(
        "Y" + std::to_string(i), spec.variances[static_cast<std::size_t>(i - 1)], 16));
  ctx->hybrid = adjoin_free(spec.model, std::move(adjoined));

  for (int i = 1; i < k; ++i)
    ctx->z_ids.push_back(ctx->hybrid->variable_id(spec.names[static_cast<std::size_t>(i - 1)]));
  for (int i = k + 1; i <= spec.size(); ++i)
    ctx->z_ids.push_back(ctx->hybrid->variable_id("Y" + std::to_string(i)));
  ctx->xk_id = ctx->hybrid->variable_id(spec.names[static_cast<std::size_t>(k - 1)]);
  ctx->yk_id = ctx->hybrid->variable_id("Y" + std::to_string(k));

  std::lock_guard lock(mu);
  cache.emplace(key, ctx);
  return ctx;
}

// E of a polynomial in the letters {Z, S}: Z ranges over the summands of
// Z_k, S is the swap slot (X_k or Y_k).
Rational expect_in_swap(const SwapContext& ctx, const NCPolynomial& poly,
                        std::int32_t slot_id) {
  static const Symbol kZ = "Z";
  static const Symbol kS = "S";
  Rational total = 0;
  const std::size_t zn = ctx.z_ids.size();

  for (const auto& [mono, coef] : poly.terms()) {
    std::vector<std::size_t> z_positions;
    const auto& letters = mono.letters();
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (letters[i] == kZ)
        z_positions.push_back(i);
      else if (letters[i] != kS)
        throw std::invalid_argument("swap polynomial letter must be Z or S");
    }
    if (!z_positions.empty() && zn == 0) continue;  // empty sum

    std::vector<std::int32_t> ids(letters.size(), slot_id);
    std::vector<std::size_t> odo(z_positions.size(), 0);
    while (true) {
      for (std::size_t j = 0; j < z_positions.size(); ++j)
        ids[z_positions[j]] = ctx.z_ids[odo[j]];
      total += coef * ctx.hybrid->evaluate_ids(ids);
      std::size_t i = odo.size();
      while (i > 0) {
        if (++odo[i - 1] < zn) break;
        odo[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
  return total;
}

}  // namespace

SwapDerivatives swap_derivative_check(const SumSpec& spec, int k, unsigned m) {
  auto ctx = swap_context(spec, k);
  const NCPolynomial f = monomial_power("x", m);
  const NCPolynomial d1 = directional_derivative(f, "Z", "S", 1);
  const NCPolynomial d2 = directional_derivative(f, "Z", "S", 2);
  const Rational s2 = spec.variance_sum();

  SwapDerivatives out;
  out.first_x = normalize_by_power(expect_in_swap(*ctx, d1, ctx->xk_id), m, s2);
  out.first_y = normalize_by_power(expect_in_swap(*ctx, d1, ctx->yk_id), m, s2);
  out.second_x = normalize_by_power(expect_in_swap(*ctx, d2, ctx->xk_id), m, s2);
  out.second_y = normalize_by_power(expect_in_swap(*ctx, d2, ctx->yk_id), m, s2);
  return out;
}

Rational swap_difference(const SumSpec& spec, int k, unsigned m) {
  auto ctx = swap_context(spec, k);
  const NCPolynomial expanded = substitute(
      monomial_power("x", m), NCPolynomial::variable("Z") + NCPolynomial::variable("S"));
  const Rational diff =
      expect_in_swap(*ctx, expanded, ctx->xk_id) - expect_in_swap(*ctx, expanded, ctx->yk_id);
  return normalize_by_power(diff, m, spec.variance_sum());
}

Rational swap_difference_tail(const SumSpec& spec, int k, unsigned m) {
  auto ctx = swap_context(spec, k);
  const NCPolynomial f = monomial_power("x", m);
  auto terms = taylor_terms(f, "Z", "S");
  const NCPolynomial tail = third_tail(f, "Z", "S");

  auto side = [&](std::int32_t slot) {
    Rational value = expect_in_swap(*ctx, tail, slot);
    for (std::size_t r = 0; r <= std::min<std::size_t>(2, terms.size() - 1); ++r)
      value += expect_in_swap(*ctx, terms[r], slot);
    return value;
  };
  return normalize_by_power(side(ctx->xk_id) - side(ctx->yk_id), m,
                            spec.variance_sum());
}

// ---------------------------------------------------------------------------
// Moment bounds

MomentBound moment_bound_check(const SumSpec& spec, int r,
                               const std::vector<Rational>& mu) {
  if (r < 1) throw std::invalid_argument("need r >= 1");
  MomentBound out;
  out.r = r;
  out.via_lyapunov = r % 2 == 1;
  const int even = out.via_lyapunov ? r + 1 : r;
  const unsigned mu_order = static_cast<unsigned>(even) * static_cast<unsigned>(even);
  if (mu.size() < mu_order)
    throw std::out_of_range("need uniform moment bounds up to order " +
                            std::to_string(mu_order));

  const Rational raw = raw_sum_moment(spec, static_cast<unsigned>(even));
  const Rational n_power =
      rational_pow(Rational(spec.size()), static_cast<unsigned>(even) / 2);
  out.moment = raw / n_power;
  out.bound = rational_pow(Rational(even / 2), static_cast<unsigned>(even)) *
              mu[mu_order - 1];
  out.holds = out.moment <= out.bound;

  if (out.via_lyapunov) {
    const double power = static_cast<double>(r) / (r + 1);
    out.lhs = std::pow(rational_to_double(out.moment), power);
    out.rhs = std::pow(rational_to_double(out.bound), power);
  } else {
    out.lhs = rational_to_double(out.moment);
    out.rhs = rational_to_double(out.bound);
  }
  return out;
}

std::vector<Rational> group_absolute_moment_bounds(unsigned max_order) {
  std::vector<Rational> mu;
  for (unsigned k = 1; k <= max_order; ++k)
    mu.push_back(k % 2 == 0 ? binomial(k, k / 2) : binomial(k + 1, (k + 1) / 2));
  return mu;
}

// ---------------------------------------------------------------------------
// Convergence experiment

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

ExperimentReport convergence_experiment(const std::vector<SumSpec>& specs,
                                        unsigned m_max) {
  if (specs.empty() || m_max < 1) throw std::invalid_argument("empty experiment");
  ExperimentReport report;
  report.label = specs.front().label;
  report.m_max = m_max;

  for (const auto& spec : specs)
    for (unsigned m = 1; m <= m_max; ++m) {
      ExperimentRow row;
      row.N = spec.size();
      row.m = m;
      row.moment = sum_moment(spec, m);
      row.target = semicircle_moment(m);
      row.error = abs(row.moment - row.target);
      report.rows.push_back(std::move(row));
    }

  for (unsigned m = 1; m <= m_max; ++m) {
    RateFit fit;
    fit.m = m;
    std::vector<const ExperimentRow*> rows;
    for (const auto& row : report.rows)
      if (row.m == m) rows.push_back(&row);

    fit.c_hat_squared = rows.front()->error * rows.front()->error *
                        Rational(rows.front()->N);
    fit.c_hat = std::sqrt(rational_to_double(fit.c_hat_squared));
    fit.nonincreasing = true;
    fit.dominated = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0 && rows[i]->error > rows[i - 1]->error) fit.nonincreasing = false;
      if (rows[i]->error * rows[i]->error * Rational(rows[i]->N) > fit.c_hat_squared)
        fit.dominated = false;
    }

    // least squares on log error vs log N over the positive errors
    std::vector<std::pair<double, double>> points;
    for (const auto* row : rows)
      if (row->error > 0)
        points.emplace_back(std::log(static_cast<double>(row->N)),
                            std::log(rational_to_double(row->error)));
    if (points.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (auto [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double n = static_cast<double>(points.size());
      fit.alpha = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
      fit.alpha = std::numeric_limits<double>::quiet_NaN();
    }
    report.fits.push_back(std::move(fit));
  }
  return report;
}

std::string ExperimentReport::to_csv() const {
  std::string out = "# convergence label=" + label + " m_max=" + std::to_string(m_max) + "\n";
  out += "N,m,moment,target,error\n";
  for (const auto& row : rows) {
    out += std::to_string(row.N) + "," + std::to_string(row.m) + "," +
           rational_to_string(row.moment) + "," + rational_to_string(row.target) +
           "," + format_double(rational_to_double(row.error)) + "\n";
  }
  return out;
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["m_max"] = m_max;
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& fit : fits) {
    nlohmann::ordered_json f;
    f["m"] = fit.m;
    if (std::isnan(fit.alpha))
      f["alpha"] = nullptr;
    else
      f["alpha"] = fit.alpha;
    f["c_hat"] = fit.c_hat;
    f["nonincreasing"] = fit.nonincreasing;
    f["dominated_by_half_power"] = fit.dominated;
    j["fits"].push_back(f);
  }
  return j.dump(2);
}

std::string ExperimentReport::to_gnuplot() const {
  // one block per degree: N, error
  std::string out;
  for (const auto& fit : fits) {
    out += "# m=" + std::to_string(fit.m) + "\n";
    for (const auto& row : rows)
      if (row.m == fit.m)
        out += std::to_string(row.N) + " " +
               format_double(rational_to_double(row.error)) + "\n";
    out += "\n\n";
  }
  return out;
}

}  // namespace nclt
