#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "semparse/semiring.hpp"

using namespace semparse;

namespace {

Term fake_axiom(int k) { return Term::terminal(0, k, "w" + std::to_string(k)); }

// a random non-zero-ish value with distinctive derivation leaves
Value random_value(const Semiring& s, std::mt19937* rng, int salt) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_int_distribution<int> k(0, 2);
  switch (s.id()) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return s.weight(k(*rng) ? 1.0 : 0.0);
    case SemiringId::Counting: {
      Value v = s.zero();
      int n = k(*rng);
      for (int i = 0; i < n; ++i) v = s.plus(v, s.one());
      return v;
    }
    case SemiringId::Inside:
    case SemiringId::Viterbi: return s.weight(u(*rng));
    case SemiringId::ViterbiDeriv:
    case SemiringId::ViterbiNBest: {
      Value v = s.axiom(u(*rng), fake_axiom(salt * 101 + 1));
      if (k(*rng) == 0) v = s.plus(v, s.axiom(u(*rng), fake_axiom(salt * 101 + 2)));
      return v;
    }
  }
  return s.zero();
}

void check_laws(const Semiring& s, int trials, double tol) {
  std::mt19937 rng(1234 + static_cast<int>(s.id()));
  for (int t = 0; t < trials; ++t) {
    Value a = random_value(s, &rng, 3 * t);
    Value b = random_value(s, &rng, 3 * t + 1);
    Value c = random_value(s, &rng, 3 * t + 2);
    CHECK(s.approx_equals(s.plus(a, s.zero()), a, tol));
    CHECK(s.approx_equals(s.times(a, s.one()), a, tol));
    CHECK(s.approx_equals(s.times(s.one(), a), a, tol));
    CHECK(s.is_zero(s.times(a, s.zero())));
    CHECK(s.is_zero(s.times(s.zero(), a)));
    CHECK(s.approx_equals(s.plus(a, b), s.plus(b, a), tol));
    CHECK(s.approx_equals(s.plus(s.plus(a, b), c), s.plus(a, s.plus(b, c)), tol));
    CHECK(s.approx_equals(s.times(s.times(a, b), c), s.times(a, s.times(b, c)), tol));
    CHECK(s.approx_equals(s.times(a, s.plus(b, c)), s.plus(s.times(a, b), s.times(a, c)), tol));
    CHECK(s.approx_equals(s.times(s.plus(a, b), c), s.plus(s.times(a, c), s.times(b, c)), tol));
    if (s.idempotent()) CHECK(s.approx_equals(s.plus(a, a), a, tol));
  }
}

}  // namespace

TEST_CASE("semiring laws hold on random triples") {
  check_laws(Semiring::boolean(), 1000, 0);
  check_laws(Semiring::counting(), 1000, 0);
  check_laws(Semiring::inside(), 1000, 1e-12);
  check_laws(Semiring::viterbi(), 1000, 1e-12);
  check_laws(Semiring::viterbi_deriv(), 1000, 1e-12);
  check_laws(Semiring::viterbi_nbest(3), 1000, 1e-12);
  check_laws(Semiring::forest(), 1000, 0);
}

TEST_CASE("boolean semiring is disjunction and conjunction") {
  auto s = Semiring::boolean();
  CHECK(s.plus(s.weight(1), s.weight(0)).as_bool());
  CHECK(s.times(s.weight(1), s.weight(1)).as_bool());
  CHECK_FALSE(s.times(s.weight(1), s.weight(0)).as_bool());
}

TEST_CASE("inside semiring adds and multiplies reals") {
  auto s = Semiring::inside();
  CHECK(s.plus(s.weight(0.25), s.weight(0.5)).as_real() == doctest::Approx(0.75));
  CHECK(s.times(s.weight(0.5), s.weight(0.5)).as_real() == doctest::Approx(0.25));
}

TEST_CASE("counting semiring adds counts") {
  auto s = Semiring::counting();
  Value two = s.plus(s.one(), s.one());
  Value three = s.plus(two, s.one());
  CHECK(s.plus(two, three).as_count() == 5);
  CHECK(s.times(two, three).as_count() == 6);
}

TEST_CASE("n-best product crosses derivation lists and keeps the top n") {
  auto s = Semiring::viterbi_nbest(2);
  Value a = s.plus(s.axiom(0.5, fake_axiom(1)), s.axiom(0.4, fake_axiom(2)));
  Value b = s.axiom(0.5, fake_axiom(3));
  Value ab = s.times(a, b);
  REQUIRE(ab.as_nbest().size() == 2);
  CHECK(ab.as_nbest()[0].prob == doctest::Approx(0.25));
  CHECK(ab.as_nbest()[1].prob == doctest::Approx(0.20));
}

TEST_CASE("n-best merge deduplicates identical derivations") {
  auto s = Semiring::viterbi_nbest(3);
  Value a = s.axiom(0.5, fake_axiom(1));
  Value merged = s.plus(a, a);
  CHECK(merged.as_nbest().size() == 1);
}

TEST_CASE("derivation tie-break keeps the lexicographically least antecedents") {
  auto s = Semiring::viterbi_deriv();
  Value a = s.axiom(0.5, fake_axiom(2));
  Value b = s.axiom(0.5, fake_axiom(1));
  Value kept = s.plus(a, b);
  REQUIRE(kept.as_deriv().has_value());
  CHECK(kept.as_deriv()->key == fake_axiom(1).sig());
  CHECK(s.equals(s.plus(b, a), kept));
}

TEST_CASE("derivation product concatenates child lists") {
  auto s = Semiring::viterbi_deriv();
  Value a = s.axiom(0.5, fake_axiom(1));
  Value b = s.axiom(0.25, fake_axiom(2));
  Value ab = s.times(a, b);
  REQUIRE(ab.as_deriv().has_value());
  CHECK(ab.as_deriv()->prob == doctest::Approx(0.125));
  CHECK(ab.as_deriv()->nodes.size() == 2);
  CHECK(ab.as_deriv()->key == fake_axiom(1).sig() + fake_axiom(2).sig());
}

TEST_CASE("finalize roots a fragment at the consequent") {
  auto s = Semiring::viterbi_deriv();
  Term cons = Term::item({Label("S")}, {DSpan::single(0, 2)});
  Value product = s.times(s.axiom(0.5, fake_axiom(1)), s.axiom(0.5, fake_axiom(2)));
  Value rooted = s.finalize(cons, product);
  REQUIRE(rooted.as_deriv()->nodes.size() == 1);
  CHECK(rooted.as_deriv()->nodes[0]->term == cons);
  CHECK(rooted.as_deriv()->nodes[0]->children.size() == 2);
}

TEST_CASE("mixed-semiring operands are a contract violation") {
  auto a = Semiring::boolean();
  auto b = Semiring::inside();
  CHECK_THROWS_AS(a.plus(a.one(), b.one()), std::logic_error);
  CHECK_THROWS_AS(a.times(b.one(), a.one()), std::logic_error);
}

TEST_CASE("log-space inside matches linear space") {
  auto lin = Semiring::inside(false);
  auto logsp = Semiring::inside(true);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  for (int t = 0; t < 200; ++t) {
    double x = u(rng), y = u(rng), z = u(rng);
    double a = lin.mass(lin.plus(lin.times(lin.weight(x), lin.weight(y)), lin.weight(z)));
    double b = logsp.mass(logsp.plus(logsp.times(logsp.weight(x), logsp.weight(y)),
                                     logsp.weight(z)));
    CHECK(std::abs(a - b) <= 1e-9 * std::max(a, b));
  }
}

TEST_CASE("flags round-trip") {
  for (const auto* flag : {"boolean", "counting", "inside", "viterbi", "viterbi-deriv",
                           "viterbi-nbest:4", "forest"})
    CHECK(Semiring::from_flag(flag).flag() == flag);
  CHECK_THROWS(Semiring::from_flag("tropical"));
}

TEST_CASE("ordering is available exactly for the value-ordered semirings") {
  CHECK_FALSE(Semiring::boolean().ordered());
  CHECK_FALSE(Semiring::counting().ordered());
  CHECK_FALSE(Semiring::forest().ordered());
  CHECK(Semiring::inside().ordered());
  CHECK(Semiring::viterbi().ordered());
  CHECK(Semiring::viterbi_deriv().ordered());
  CHECK(Semiring::viterbi_nbest(2).ordered());
  CHECK_THROWS_AS(Semiring::boolean().compare(Semiring::boolean().one(),
                                              Semiring::boolean().zero()),
                  std::logic_error);
}
