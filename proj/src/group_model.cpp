#include "nclt/group_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "nclt/memo.hpp"

namespace nclt {

// ---------------------------------------------------------------------------
// Words

GroupWord::GroupWord(std::vector<GroupLetter> letters) : letters_(std::move(letters)) {
  for (const auto& l : letters_) {
    if (l.index < 1) throw std::invalid_argument("generator index must be >= 1");
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +-1");
  }
}

GroupWord GroupWord::parse(std::string_view text) {
  if (text.empty() || text == "e") return GroupWord();
  std::vector<GroupLetter> letters;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    std::string_view tok =
        text.substr(start, dot == std::string_view::npos ? dot : dot - start);
    int sign = 1;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      sign = -1;
      tok.remove_suffix(3);
    }
    if (tok.size() < 2 || tok[0] != 'f')
      throw std::invalid_argument("bad letter: " + std::string(tok));
    int index = 0;
    for (char ch : tok.substr(1)) {
      if (ch < '0' || ch > '9')
        throw std::invalid_argument("bad letter: " + std::string(tok));
      index = index * 10 + (ch - '0');
    }
    if (index < 1) throw std::invalid_argument("bad letter: " + std::string(tok));
    letters.push_back({index, sign});
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return GroupWord(std::move(letters));
}

std::string GroupWord::str() const {
  if (letters_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += '.';
    out += 'f';
    out += std::to_string(letters_[i].index);
    if (letters_[i].sign < 0) out += "^-1";
  }
  return out;
}

int GroupWord::max_index() const {
  int top = 0;
  for (const auto& l : letters_) top = std::max(top, l.index);
  return top;
}

GroupWord GroupWord::inverse() const {
  std::vector<GroupLetter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.sign = -l.sign;
  return GroupWord(std::move(out));
}

GroupWord GroupWord::operator*(const GroupWord& rhs) const {
  std::vector<GroupLetter> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return GroupWord(std::move(out));
}

bool operator<(const GroupWord& a, const GroupWord& b) {
  if (a.letters_.size() != b.letters_.size())
    return a.letters_.size() < b.letters_.size();
  return a.letters_ < b.letters_;
}

GroupWord free_reduce(const GroupWord& w) {
  std::vector<GroupLetter> stack;
  stack.reserve(w.length());
  for (const auto& l : w.letters()) {
    if (!stack.empty() && stack.back() == l.inverse())
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return GroupWord(std::move(stack));
}

GroupWord cyclic_reduce(const GroupWord& w) {
  std::vector<GroupLetter> letters = free_reduce(w).letters();
  std::size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return GroupWord(std::vector<GroupLetter>(
      letters.begin() + static_cast<std::ptrdiff_t>(lo),
      letters.begin() + static_cast<std::ptrdiff_t>(hi)));
}

bool is_reduced(const GroupWord& w) { return free_reduce(w) == w; }

bool is_cyclically_reduced(const GroupWord& w) { return cyclic_reduce(w) == w; }

std::map<int, int> mod3_degrees(const GroupWord& w) {
  std::map<int, int> sums;
  for (const auto& l : w.letters()) sums[l.index] += l.sign;
  for (auto& [index, s] : sums) s = ((s % 3) + 3) % 3;
  return sums;
}

namespace {

bool mod3_clean(const GroupWord& w) {
  for (const auto& [index, residue] : mod3_degrees(w))
    if (residue != 0) return false;
  return true;
}

GroupWord rotation(const GroupWord& w, std::size_t by) {
  const auto& ls = w.letters();
  std::vector<GroupLetter> out(ls.begin() + static_cast<std::ptrdiff_t>(by), ls.end());
  out.insert(out.end(), ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(by));
  return GroupWord(std::move(out));
}

GroupWord cyclic_sub(const GroupWord& w, std::size_t offset, std::size_t len) {
  std::vector<GroupLetter> out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    out.push_back(w.letters()[(offset + i) % w.length()]);
  return GroupWord(std::move(out));
}

struct GroupWordHash {
  std::size_t operator()(const GroupWord& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& l : w.letters()) {
      h ^= static_cast<std::uint64_t>(l.index) * 2 + (l.sign > 0 ? 0 : 1);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Relators

std::vector<GroupWord> symmetrize(const std::vector<GroupWord>& seeds) {
  std::set<GroupWord> closed;
  std::vector<GroupWord> queue = seeds;
  while (!queue.empty()) {
    GroupWord w = cyclic_reduce(queue.back());
    queue.pop_back();
    if (w.empty()) continue;
    for (const GroupWord& base : {w, w.inverse()}) {
      for (std::size_t by = 0; by < base.length(); ++by) {
        GroupWord rot = rotation(base, by);
        if (closed.insert(rot).second) queue.push_back(rot);
      }
    }
  }
  return {closed.begin(), closed.end()};
}

RelatorSet RelatorSet::build(int kmax) {
  if (kmax < 2) throw std::invalid_argument("relators need kmax >= 2");
  std::vector<GroupWord> seeds;
  for (int k = 2; k <= kmax; ++k) {
    std::vector<GroupLetter> letters;
    for (int t = 0; t < 3; ++t) {
      letters.push_back({k, 1});
      letters.push_back({k - 1, 1});
    }
    seeds.emplace_back(std::move(letters));
  }

  RelatorSet out;
  out.kmax_ = kmax;
  out.relators_ = symmetrize(seeds);
  out.set_ = {out.relators_.begin(), out.relators_.end()};

  // closure sanity: symmetrizing again must not add words, and every
  // relator is a length-6 alternation of two adjacent indices
  if (symmetrize(out.relators_) != out.relators_)
    throw std::logic_error("relator symmetrization not idempotent");
  for (const auto& r : out.relators_) {
    if (r.length() != 6) throw std::logic_error("relator of unexpected length");
    for (std::size_t i = 0; i + 1 < r.length(); ++i)
      if (std::abs(r.letters()[i].index - r.letters()[i + 1].index) != 1)
        throw std::logic_error("relator indices must alternate");
  }
  return out;
}

namespace {

std::set<GroupWord> pieces_of(const std::vector<GroupWord>& relators) {
  std::set<GroupWord> pieces;
  for (const auto& r1 : relators) {
    for (const auto& r2 : relators) {
      if (r1 == r2) continue;
      std::size_t lcp = 0;
      while (lcp < r1.length() && lcp < r2.length() &&
             r1.letters()[lcp] == r2.letters()[lcp])
        ++lcp;
      for (std::size_t len = 1; len <= lcp; ++len)
        pieces.insert(GroupWord(std::vector<GroupLetter>(
            r1.letters().begin(),
            r1.letters().begin() + static_cast<std::ptrdiff_t>(len))));
    }
  }
  return pieces;
}

}  // namespace

PieceReport compute_pieces(const RelatorSet& relators) {
  PieceReport report;
  std::set<GroupWord> own = pieces_of(relators.relators());
  report.pieces = {own.begin(), own.end()};
  for (const auto& p : report.pieces)
    report.max_piece_length = std::max(report.max_piece_length, p.length());

  std::set<GroupWord> extended =
      pieces_of(RelatorSet::build(relators.kmax() + 1).relators());
  for (const auto& p : extended)
    if (p.max_index() <= relators.kmax() && !own.count(p)) report.boundary.push_back(p);
  return report;
}

bool check_metric(const RelatorSet& relators, const Rational& lambda) {
  const Rational lam = canonical(lambda);
  if (lam <= 0) throw std::invalid_argument("lambda must be positive");
  std::set<GroupWord> pieces = pieces_of(relators.relators());
  for (const auto& r : relators.relators()) {
    for (std::size_t len = 1; len <= r.length(); ++len) {
      GroupWord prefix(std::vector<GroupLetter>(
          r.letters().begin(), r.letters().begin() + static_cast<std::ptrdiff_t>(len)));
      if (!pieces.count(prefix)) continue;
      if (!(Rational(static_cast<long>(len)) <
            lam * Rational(static_cast<long>(r.length()))))
        return false;
    }
  }
  return true;
}

bool check_triangle(const std::vector<GroupWord>& relators) {
  auto seam_cancels = [](const GroupWord& a, const GroupWord& b) {
    if (a.empty() || b.empty()) return false;
    return a.letters().back() == b.letters().front().inverse();
  };
  for (const auto& r1 : relators)
    for (const auto& r2 : relators) {
      if (r2 == r1.inverse()) continue;
      if (!seam_cancels(r1, r2)) continue;
      for (const auto& r3 : relators) {
        if (r3 == r2.inverse()) continue;
        if (seam_cancels(r2, r3) && seam_cancels(r3, r1)) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Dehn's algorithm

namespace {

// relator prefixes of length 4..6 -> (relator, inverse of the remainder);
// unambiguous because pieces have length 1
struct PrefixTable {
  std::unordered_map<GroupWord, std::pair<GroupWord, GroupWord>, GroupWordHash> entries;
};

const PrefixTable& prefix_table(int kmax) {
  static std::mutex mu;
  static std::unordered_map<int, std::unique_ptr<PrefixTable>> tables;
  std::lock_guard lock(mu);
  auto& slot = tables[kmax];
  if (!slot) {
    auto table = std::make_unique<PrefixTable>();
    const RelatorSet relators = RelatorSet::build(kmax);
    for (const auto& r : relators.relators()) {
      for (std::size_t len = 4; len <= r.length(); ++len) {
        GroupWord prefix(std::vector<GroupLetter>(
            r.letters().begin(), r.letters().begin() + static_cast<std::ptrdiff_t>(len)));
        GroupWord tail(std::vector<GroupLetter>(
            r.letters().begin() + static_cast<std::ptrdiff_t>(len), r.letters().end()));
        table->entries.emplace(std::move(prefix), std::make_pair(r, tail.inverse()));
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

}  // namespace

Classification dehn_classify(const GroupWord& w) {
  Classification out;
  GroupWord core = cyclic_reduce(w);
  out.cyclic_core = core;

  while (true) {
    if (core.empty()) {
      out.verdict = Verdict::Trivial;
      return out;
    }
    if (!mod3_clean(core)) {
      out.verdict = Verdict::Nontrivial;
      return out;
    }
    const int kmax = core.max_index();
    bool rewritten = false;
    if (kmax >= 2) {
      const auto& table = prefix_table(kmax);
      const std::size_t len = core.length();
      for (std::size_t sub = std::min<std::size_t>(6, len); !rewritten && sub >= 4;
           --sub) {
        for (std::size_t offset = 0; offset < len; ++offset) {
          auto hit = table.entries.find(cyclic_sub(core, offset, sub));
          if (hit == table.entries.end()) continue;
          const auto& [relator, replacement] = hit->second;
          out.trace.push_back({offset, relator, replacement});
          GroupWord rest = cyclic_sub(core, offset + sub, len - sub);
          core = cyclic_reduce(replacement * rest);
          rewritten = true;
          break;
        }
        if (sub == 4) break;
      }
    }
    if (!rewritten) {
      out.verdict = Verdict::Nontrivial;
      return out;
    }
  }
}

Verdict classify_word(const GroupWord& w) {
  static Memo<GroupWord, Verdict, GroupWordHash> cache;
  GroupWord core = cyclic_reduce(w);
  if (auto hit = cache.find(core)) return *hit;
  Verdict v = dehn_classify(core).verdict;
  cache.insert(std::move(core), v);
  return v;
}

std::string Classification::to_json() const {
  nlohmann::ordered_json j;
  j["cyclic_core"] = cyclic_core.str();
  j["verdict"] = verdict == Verdict::Trivial ? "trivial" : "nontrivial";
  j["trace"] = nlohmann::ordered_json::array();
  for (const auto& step : trace) {
    nlohmann::ordered_json s;
    s["position"] = step.position;
    s["relator"] = step.relator.str();
    s["replacement"] = step.replacement.str();
    j["trace"].push_back(s);
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Group algebra

GroupAlgebraElement GroupAlgebraElement::unit() { return from_word(GroupWord()); }

GroupAlgebraElement GroupAlgebraElement::from_word(const GroupWord& w, const Rational& c) {
  GroupAlgebraElement out;
  out.add(free_reduce(w), canonical(c));
  return out;
}

void GroupAlgebraElement::add(const GroupWord& w, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GroupAlgebraElement GroupAlgebraElement::operator+(const GroupAlgebraElement& rhs) const {
  GroupAlgebraElement out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add(w, c);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::operator-(const GroupAlgebraElement& rhs) const {
  GroupAlgebraElement out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add(w, -c);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::operator*(const GroupAlgebraElement& rhs) const {
  GroupAlgebraElement out;
  for (const auto& [wa, ca] : terms_)
    for (const auto& [wb, cb] : rhs.terms_) out.add(free_reduce(wa * wb), ca * cb);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::operator*(const Rational& c) const {
  GroupAlgebraElement out;
  const Rational cc = canonical(c);
  if (cc == 0) return out;
  for (const auto& [w, k] : terms_) out.terms_.emplace(w, k * cc);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::adjoint() const {
  GroupAlgebraElement out;
  for (const auto& [w, c] : terms_) out.add(w.inverse(), c);
  return out;
}

Rational expectation(const GroupAlgebraElement& h) {
  Rational total = 0;
  for (const auto& [w, c] : h.terms())
    if (classify_word(w) == Verdict::Trivial) total += c;
  return total;
}

GroupAlgebraElement group_variable(int i) {
  if (i < 1) throw std::invalid_argument("generator index must be >= 1");
  return GroupAlgebraElement::from_word(GroupWord({{i, 1}})) +
         GroupAlgebraElement::from_word(GroupWord({{i, -1}}));
}

// ---------------------------------------------------------------------------
// Moment functional over the X_i

Rational group_monomial_expectation(const std::vector<int>& indices) {
  static Memo<std::vector<std::int32_t>, Rational, IntVecHash> cache;
  std::vector<std::int32_t> key(indices.begin(), indices.end());
  if (auto hit = cache.find(key)) return *hit;

  const std::size_t m = indices.size();
  long trivial = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<GroupLetter> letters(m);
    for (std::size_t j = 0; j < m; ++j)
      letters[j] = {indices[j], (mask >> j & 1) ? -1 : 1};
    if (classify_word(GroupWord(std::move(letters))) == Verdict::Trivial) ++trivial;
  }
  Rational out(trivial);
  cache.insert(std::move(key), out);
  return out;
}

GroupMomentFunctional::GroupMomentFunctional(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw std::invalid_argument("need at least one variable");
  for (int i = 1; i <= nvars; ++i) names_.push_back("X" + std::to_string(i));
}

Rational GroupMomentFunctional::evaluate(const Monomial& word) const {
  std::vector<std::int32_t> ids;
  ids.reserve(word.degree());
  for (const auto& x : word.letters()) ids.push_back(variable_id(x));
  return evaluate_ids(ids);
}

Rational GroupMomentFunctional::evaluate_ids(
    const std::vector<std::int32_t>& letters) const {
  std::vector<int> indices;
  indices.reserve(letters.size());
  for (auto id : letters) {
    if (id < 0 || id >= nvars_) throw std::invalid_argument("variable id out of range");
    indices.push_back(static_cast<int>(id) + 1);
  }
  return group_monomial_expectation(indices);
}

}  // namespace nclt
