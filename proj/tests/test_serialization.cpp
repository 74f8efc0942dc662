#include <doctest.h>

#include <random>

#include "nclt/clt_harness.hpp"
#include "nclt/group_model.hpp"
#include "nclt/matrix_oracle.hpp"
#include "nclt/moment_models.hpp"

using namespace nclt;

TEST_CASE("rational text forms") {
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK(rational_to_string(canonical(Rational(-6, 4))) == "-3/2");
  CHECK(parse_rational("-3/2") == canonical(Rational(-3, 2)));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("polynomial text: fixed forms and random round trips") {
  NCPolynomial f = NCPolynomial::term(Monomial({std::vector<Symbol>{"Z", "X"}}), 2) +
                   NCPolynomial(canonical(Rational(-1, 3)));
  CHECK(f.str() == "-1/3 * 1 + 2 * Z.X");
  CHECK(NCPolynomial::parse("-1/3 * 1 + 2 * Z.X") == f);

  std::mt19937 rng(808);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5), len(0, 4), pick(0, 2);
  const std::vector<Symbol> alphabet = {"X", "Z", "Y_2"};
  for (int trial = 0; trial < 50; ++trial) {
    NCPolynomial g;
    for (int t = 0; t < 4; ++t) {
      std::vector<Symbol> letters;
      int L = len(rng);
      for (int i = 0; i < L; ++i) letters.push_back(alphabet[pick(rng)]);
      g = g + NCPolynomial::term(Monomial(std::move(letters)),
                                 canonical(Rational(num(rng), den(rng))));
    }
    CHECK(NCPolynomial::parse(g.str()) == g);
  }
}

TEST_CASE("group word syntax round trips") {
  std::mt19937 rng(606);
  std::uniform_int_distribution<int> idx(1, 12), sgn(0, 1), len(0, 10);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<GroupLetter> ls;
    int L = len(rng);
    for (int i = 0; i < L; ++i) ls.push_back({idx(rng), sgn(rng) ? 1 : -1});
    GroupWord w(ls);
    CHECK(GroupWord::parse(w.str()) == w);
  }
  CHECK(GroupWord::parse("e").str() == "e");
}

TEST_CASE("condition A report carries exact rational strings") {
  auto model = classical_model(generic_centered_specs(2, 8));
  auto report = check_condition_A(*model, model->variables(), 4);
  auto json = report.to_json();
  CHECK(json.find("\"word\": \"X2.X1.X2.X1\"") != std::string::npos);
  // lhs of that violation is E(X2^2) E(X1^2), an exact product
  auto lhs = model->moment_of("X2", 2) * model->moment_of("X1", 2);
  CHECK(json.find("\"lhs\": \"" + rational_to_string(lhs) + "\"") != std::string::npos);
}

TEST_CASE("classification trace json lists rewrite steps in order") {
  GroupWord w = GroupWord::parse("f3^-1") *
                GroupWord::parse("f2.f1.f2.f1.f2.f1") * GroupWord::parse("f3");
  auto c = dehn_classify(w);
  CHECK(c.verdict == Verdict::Trivial);
  auto json = c.to_json();
  CHECK(json.find("\"cyclic_core\": \"f2.f1.f2.f1.f2.f1\"") != std::string::npos);
  CHECK(json.find("\"replacement\"") != std::string::npos);
}

TEST_CASE("experiment and sweep reports are byte-stable") {
  std::vector<SumSpec> specs;
  for (int N : {2, 4}) specs.push_back(group_sum_spec(N));
  auto a = convergence_experiment(specs, 3);
  auto b = convergence_experiment(specs, 3);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_gnuplot() == b.to_gnuplot());
  CHECK(a.to_csv().rfind("# convergence label=group", 0) == 0);

  SweepConfig config;
  config.trials = 12;
  auto s1 = run_inequality_sweep(config);
  auto s2 = run_inequality_sweep(config);
  CHECK(s1.to_csv() == s2.to_csv());
  CHECK(s1.to_csv().find("family,trial,dim,r,exponents,lhs,rhs,margin,holds") !=
        std::string::npos);
}
