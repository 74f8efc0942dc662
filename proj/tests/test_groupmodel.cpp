#include <doctest.h>

#include <random>
#include <stdexcept>

#include "nclt/group_model.hpp"

using namespace nclt;

namespace {

GroupWord W(std::string_view text) { return GroupWord::parse(text); }

GroupWord pow3(const GroupWord& base) { return base * base * base; }

}  // namespace

TEST_CASE("word parse and print round trip") {
  CHECK(W("e").empty());
  CHECK(W("").empty());
  CHECK(W("f2.f1^-1").str() == "f2.f1^-1");
  CHECK(W("f12").letters().size() == 1);
  CHECK(W("f12").letters()[0].index == 12);
  CHECK_THROWS_AS(W("g2"), std::invalid_argument);
  CHECK_THROWS_AS(W("f0"), std::invalid_argument);
  CHECK_THROWS_AS(W("f2..f1"), std::invalid_argument);
}

TEST_CASE("free reduction") {
  CHECK(free_reduce(W("f1.f1^-1.f2")) == W("f2"));
  CHECK(free_reduce(W("e")) == W("e"));
  CHECK(free_reduce(W("f2.f1.f1^-1.f2^-1")) == W("e"));
  CHECK(is_reduced(W("f2.f1.f2")));
  CHECK(!is_reduced(W("f2.f2^-1")));
  // length never increases
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> idx(1, 3), sgn(0, 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<GroupLetter> ls;
    for (int i = 0; i < t % 12; ++i) ls.push_back({idx(rng), sgn(rng) ? 1 : -1});
    GroupWord w(ls);
    CHECK(free_reduce(w).length() <= w.length());
    CHECK(is_reduced(free_reduce(w)));
  }
}

TEST_CASE("cyclic reduction") {
  CHECK(cyclic_reduce(W("f1.f2.f1^-1")) == W("f2"));
  CHECK(cyclic_reduce(W("f2.f1")) == W("f2.f1"));
  GroupWord conj = W("f3^-1") * pow3(W("f2.f1")) * W("f3");
  CHECK(cyclic_reduce(conj) == pow3(W("f2.f1")));
  CHECK(is_cyclically_reduced(pow3(W("f2.f1"))));
  CHECK(!is_cyclically_reduced(W("f1.f2.f1^-1")));
}

TEST_CASE("relator set construction") {
  CHECK_THROWS_AS(RelatorSet::build(1), std::invalid_argument);

  auto r2 = RelatorSet::build(2);
  CHECK(r2.contains(pow3(W("f2.f1"))));
  CHECK(r2.contains(pow3(W("f1.f2"))));
  CHECK(r2.contains(pow3(W("f2^-1.f1^-1"))));
  CHECK(r2.contains(pow3(W("f1^-1.f2^-1"))));

  // the four listed families are already closed under rotation and inverse:
  // each (f_k f_{k-1})^3 word has period 2, so it contributes exactly four
  // distinct symmetrized words per k
  for (int kmax : {2, 3, 5})
    CHECK(RelatorSet::build(kmax).relators().size() == 4u * (kmax - 1));

  // symmetrizing twice is idempotent
  auto once = symmetrize(r2.relators());
  CHECK(once == r2.relators());
}

TEST_CASE("pieces: only single letters with interior indices") {
  auto report = compute_pieces(RelatorSet::build(5));
  CHECK(report.max_piece_length == 1);
  std::set<GroupWord> expected;
  for (int k = 2; k <= 4; ++k) {
    expected.insert(GroupWord({{k, 1}}));
    expected.insert(GroupWord({{k, -1}}));
  }
  CHECK(std::set<GroupWord>(report.pieces.begin(), report.pieces.end()) == expected);
  // at the truncation boundary f_5 only heads one relator family; with the
  // k=6 family instantiated it becomes a piece
  CHECK(std::set<GroupWord>(report.boundary.begin(), report.boundary.end()) ==
        std::set<GroupWord>{GroupWord({{5, 1}}), GroupWord({{5, -1}})});

  // kmax = 2 has no interior index at all
  auto edge = compute_pieces(RelatorSet::build(2));
  CHECK(edge.pieces.empty());
  CHECK(edge.boundary.size() == 2);
}

TEST_CASE("metric condition") {
  for (int kmax : {3, 6}) {
    auto r = RelatorSet::build(kmax);
    CHECK(check_metric(r, Rational(1, 5)));
    CHECK(check_metric(r, Rational(1, 4)));
    CHECK(!check_metric(r, Rational(1, 6)));  // 1 < 6/6 fails strictly
  }
  CHECK_THROWS_AS(check_metric(RelatorSet::build(2), Rational(0)), std::invalid_argument);
}

TEST_CASE("triangle condition") {
  CHECK(check_triangle(RelatorSet::build(4).relators()));
  CHECK(check_triangle(RelatorSet::build(6).relators()));
  CHECK(check_triangle({}));

  // a cancelling cycle: every seam of r1r2, r2r3, r3r1 cancels
  std::vector<GroupWord> broken = {W("f1.f2"), W("f2^-1.f3"), W("f3^-1.f1^-1")};
  CHECK(!check_triangle(broken));
}

TEST_CASE("mod 3 exponent residues") {
  auto r = mod3_degrees(W("f2.f1.f2"));
  CHECK(r == std::map<int, int>{{1, 1}, {2, 2}});
  CHECK(mod3_degrees(pow3(W("f2.f1"))) == std::map<int, int>{{1, 0}, {2, 0}});
  CHECK(mod3_degrees(W("f4.f4")) == std::map<int, int>{{4, 2}});
}

TEST_CASE("dehn classification: the worked words") {
  auto trivial = dehn_classify(pow3(W("f2.f1")));
  CHECK(trivial.verdict == Verdict::Trivial);
  CHECK(!trivial.trace.empty());

  CHECK(dehn_classify(pow3(W("f2.f1^-1"))).verdict == Verdict::Nontrivial);
  CHECK(dehn_classify(W("f2.f1.f2^-1.f3")).verdict == Verdict::Nontrivial);
  // f_k W1 f_k^-1 W2 with short lower-index words: survives the mod-3
  // screen but contains no half-relator subword
  CHECK(dehn_classify(W("f4.f2.f1.f4^-1.f2^-1.f1^-1")).verdict == Verdict::Nontrivial);
  CHECK(dehn_classify(W("e")).verdict == Verdict::Trivial);
  // powers of a single generator pass mod-3 at exponent 3 but are not trivial
  CHECK(dehn_classify(W("f1.f1.f1")).verdict == Verdict::Nontrivial);
  CHECK(dehn_classify(W("f2.f2.f2")).verdict == Verdict::Nontrivial);
}

TEST_CASE("dehn classification: every relator is trivial") {
  const RelatorSet relators = RelatorSet::build(6);
  for (const auto& r : relators.relators())
    CHECK(classify_word(r) == Verdict::Trivial);
}

TEST_CASE("dehn classification: exhaustive sign scan of (X2 X1)^3 support") {
  // among the 64 sign choices exactly the all-plus and all-minus words
  // collapse to the identity
  int trivial_count = 0;
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<GroupLetter> ls;
    for (int pos = 0; pos < 6; ++pos) {
      int index = pos % 2 == 0 ? 2 : 1;
      ls.push_back({index, (mask >> pos & 1) ? -1 : 1});
    }
    GroupWord w(ls);
    if (classify_word(w) == Verdict::Trivial) {
      ++trivial_count;
      bool all_plus = mask == 0;
      bool all_minus = mask == 63;
      CHECK((all_plus || all_minus));
    }
  }
  CHECK(trivial_count == 2);
}

TEST_CASE("dehn classification: conjugation invariance") {
  std::mt19937 rng(2718);
  std::uniform_int_distribution<int> idx(1, 4), sgn(0, 1), wlen(0, 12), ulen(1, 3);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<GroupLetter> wl, ul;
    int lw = wlen(rng), lu = ulen(rng);
    for (int i = 0; i < lw; ++i) wl.push_back({idx(rng), sgn(rng) ? 1 : -1});
    for (int i = 0; i < lu; ++i) ul.push_back({idx(rng), sgn(rng) ? 1 : -1});
    GroupWord w(wl), u(ul);
    CHECK(classify_word(u * w * u.inverse()) == classify_word(w));
  }
}

TEST_CASE("dehn classification: terminates with a shrinking trace") {
  std::mt19937 rng(31415);
  std::uniform_int_distribution<int> idx(1, 5), sgn(0, 1);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<GroupLetter> ls;
    for (int i = 0; i < 40; ++i) ls.push_back({idx(rng), sgn(rng) ? 1 : -1});
    GroupWord w(ls);
    auto c = dehn_classify(w);
    // each rewrite shortens by at least 2 letters
    CHECK(c.trace.size() <= w.length() / 2 + 1);
  }
}

TEST_CASE("relator truncation: high-index relators cannot touch low-index words") {
  // every >=4-letter relator prefix contains the top index of its relator
  // at least twice, so relators above a word's maximal index never match
  const RelatorSet relators = RelatorSet::build(8);
  for (const auto& r : relators.relators()) {
    int top = r.max_index();
    for (std::size_t len = 4; len <= 6; ++len) {
      int hits = 0;
      for (std::size_t i = 0; i < len; ++i)
        if (r.letters()[i].index == top) ++hits;
      CHECK(hits >= 2);
    }
  }
}

TEST_CASE("group algebra arithmetic") {
  auto x1 = group_variable(1);
  CHECK(x1.terms().size() == 2);
  CHECK(x1.adjoint() == x1);

  auto sq = x1 * x1;
  GroupAlgebraElement expected = GroupAlgebraElement::from_word(W("f1.f1")) +
                                 GroupAlgebraElement::unit() * Rational(2) +
                                 GroupAlgebraElement::from_word(W("f1^-1.f1^-1"));
  CHECK(sq == expected);

  auto h = GroupAlgebraElement::from_word(W("f2.f1"), Rational(1, 2)) +
           GroupAlgebraElement::from_word(W("f3"), Rational(-2));
  auto adj = h.adjoint();
  CHECK(adj.terms().count(W("f1^-1.f2^-1")) == 1);
  CHECK(adj.terms().at(W("f3^-1")) == Rational(-2));
  CHECK_THROWS_AS(group_variable(0), std::invalid_argument);
}

TEST_CASE("group expectation: the paper-scale constants") {
  for (int i : {1, 2, 5}) {
    CHECK(expectation(group_variable(i)) == 0);
    CHECK(expectation(group_variable(i) * group_variable(i)) == 2);
  }
  auto x1 = group_variable(1), x2 = group_variable(2);
  CHECK(expectation(x2 * x1 * x2 * x1 * x2 * x1) == 2);
  CHECK(group_monomial_expectation({2, 1, 2, 1, 2, 1}) == 2);
  CHECK(group_monomial_expectation({}) == 1);
}

TEST_CASE("group moment functional: marginals and traciality") {
  GroupMomentFunctional E(3);
  CHECK(E.evaluate(Monomial::unit()) == 1);
  // even marginals are central binomial coefficients, odd vanish
  for (unsigned p = 1; p <= 4; ++p) {
    CHECK(E.moment_of("X1", 2 * p) == binomial(2 * p, p));
    CHECK(E.moment_of("X1", 2 * p - 1) == 0);
  }

  std::mt19937 rng(555);
  std::uniform_int_distribution<int> pick(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Symbol> u, v;
    for (int i = 0; i < 1 + trial % 3; ++i) u.push_back("X" + std::to_string(pick(rng)));
    for (int i = 0; i < 1 + (trial / 3) % 3; ++i)
      v.push_back("X" + std::to_string(pick(rng)));
    std::vector<Symbol> uv = u, vu = v;
    uv.insert(uv.end(), v.begin(), v.end());
    vu.insert(vu.end(), u.begin(), u.end());
    CHECK(E.evaluate(Monomial(uv)) == E.evaluate(Monomial(vu)));
  }
}

TEST_CASE("group model is not free: the witness word") {
  GroupMomentFunctional E(2);
  auto violations = check_freeness(E, E.variables(), 6);
  bool found = false;
  for (const auto& v : violations)
    if (v.word_str() == "X2.X1.X2.X1.X2.X1" && v.value == 2) found = true;
  CHECK(found);
}

TEST_CASE("group model satisfies the moment identities A1-A3") {
  GroupMomentFunctional E(3);
  auto report = check_condition_A(E, E.variables(), 5);
  CHECK(report.ok());
}

TEST_CASE("classification trace serializes") {
  auto c = dehn_classify(pow3(W("f2.f1")));
  auto text = c.to_json();
  CHECK(text.find("\"verdict\": \"trivial\"") != std::string::npos);
  CHECK(text.find("\"relator\"") != std::string::npos);
  CHECK(text.find("\"position\"") != std::string::npos);
}
