#include <doctest.h>

#include <map>
#include <random>

#include "semparse/dspan.hpp"

using namespace semparse;

namespace {

DSpan ds(const std::string& text) { return DSpan::parse(text); }
PrecedenceArray pa(const std::string& text) { return PrecedenceArray::parse(text); }

// random proper d-spans over disjoint boundary sets
std::pair<DSpan, DSpan> random_disjoint_pair(std::mt19937* rng) {
  std::uniform_int_distribution<int> n_points(2, 8);
  std::uniform_int_distribution<int> coin(0, 1);
  while (true) {
    int points = n_points(*rng);
    std::vector<Interval> a, b;
    int cursor = 0;
    for (int i = 0; i < points; ++i) {
      int begin = cursor + coin(*rng);
      int end = begin + 1 + coin(*rng);
      cursor = end;
      (coin(*rng) ? a : b).push_back({begin, end});
    }
    auto merge_touching = [](std::vector<Interval> v) {
      std::vector<Interval> out;
      for (const auto& iv : v) {
        if (!out.empty() && out.back().end == iv.begin)
          out.back().end = iv.end;
        else
          out.push_back(iv);
      }
      return out;
    };
    a = merge_touching(a);
    b = merge_touching(b);
    if (a.empty() || b.empty()) continue;
    return {DSpan(a), DSpan(b)};
  }
}

// same symbols in the same arrangement; link indexes may be renamed
// consistently (they only mark co-indexation)
bool same_rhs(const std::vector<std::vector<std::vector<JoinedSymbol>>>& a,
              const std::vector<std::vector<std::vector<JoinedSymbol>>>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> fwd, bwd;
  for (size_t d = 0; d < a.size(); ++d) {
    if (a[d].size() != b[d].size()) return false;
    for (size_t r = 0; r < a[d].size(); ++r) {
      if (a[d][r].size() != b[d][r].size()) return false;
      for (size_t k = 0; k < a[d][r].size(); ++k) {
        if (a[d][r][k].symbol != b[d][r][k].symbol) return false;
        int ca = a[d][r][k].column, cb = b[d][r][k].column;
        auto f = fwd.find(ca);
        auto g = bwd.find(cb);
        if (f == fwd.end() && g == bwd.end()) {
          fwd[ca] = cb;
          bwd[cb] = ca;
        } else if (f == fwd.end() || g == bwd.end() || f->second != cb || g->second != ca) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("d-span parsing and printing round-trip") {
  for (const auto* text : {"()", "(1,3)", "(1,3;7,9)", "(0,1;2,4;5,9)"}) {
    CHECK(DSpan::parse(text).str() == text);
  }
  CHECK(ds("()").is_empty());
  CHECK(ds("(1,3;7,9)").fan_out() == 2);
  CHECK(ds("(1,3;7,9)").width() == 4);
  CHECK_THROWS_AS(DSpan({{3, 1}}), UndefinedOperation);
  CHECK_THROWS_AS(DSpan({{0, 2}, {1, 3}}), UndefinedOperation);
}

TEST_CASE("proper d-spans have non-zero widths and real gaps") {
  CHECK(ds("(1,3;7,9)").proper());
  CHECK_FALSE(DSpan({{1, 1}}).proper());
  CHECK_FALSE(DSpan({{1, 2}, {2, 3}}).proper());
}

TEST_CASE("concat merges touching intervals") {
  CHECK(concat(ds("(1,3;8,9)"), ds("(7,8)")).str() == "(1,3;7,9)");
  CHECK(concat(ds("()"), ds("(2,4)")).str() == "(2,4)");
  CHECK(concat(ds("(0,1)"), ds("(1,2)")).str() == "(0,2)");
  CHECK_THROWS_AS(concat(ds("(0,2)"), ds("(1,3)")), UndefinedOperation);
}

TEST_CASE("relativize reports contiguity and order") {
  CHECK(relativize(ds("(1,3;8,9)"), ds("(7,8)")).str() == "[1;2,1]");
  CHECK(relativize(ds("(0,1)"), ds("(1,2)")).str() == "[1,2]");
  CHECK(relativize(ds("(1,2;3,4)"), ds("(2,3)")).str() == "[1,2,1]");
  CHECK(relativize(ds("(7,8)"), ds("(1,3;8,9)")).str() == "[2;1,2]");
  CHECK(relativize(ds("(0,1)"), ds("(2,3)")).str() == "[1;2]");
  CHECK(relativize(ds("(1,2)"), ds("()")).str() == "[1]");
  CHECK(relativize(ds("()"), ds("(1,2)")).str() == "[2]");
  CHECK(relativize(ds("()"), ds("()")).str() == "[]");
  CHECK_THROWS_AS(relativize(ds("(0,2)"), ds("(1,3)")), UndefinedOperation);
}

TEST_CASE("subtract inverts concat") {
  CHECK(subtract(ds("(1,3;7,9)"), ds("(7,8)")).str() == "(1,3;8,9)");
  CHECK(subtract(ds("(2,4)"), ds("(2,4)")).str() == "()");
  CHECK(subtract(ds("(0,5)"), ds("(1,2)")).str() == "(0,1;2,5)");
  CHECK_THROWS_AS(subtract(ds("(0,2;3,5)"), ds("(1,4)")), UndefinedOperation);
}

TEST_CASE("reverse relativization is subtraction then relativization") {
  CHECK(rev_relativize(ds("(1,3;7,9)"), ds("(7,8)")).str() == "[1;2,1]");
  CHECK(rev_relativize(ds("(0,2)"), ds("(1,2)")).str() == "[1,2]");
  CHECK(rev_relativize(ds("(0,5)"), ds("(1,2)")).str() == "[1,2,1]");
}

TEST_CASE("randomized span algebra identities") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    auto [sigma, tau] = random_disjoint_pair(&rng);
    DSpan nu = concat(sigma, tau);
    CHECK(concat(tau, sigma) == nu);                       // commutativity
    CHECK(subtract(nu, tau) == sigma);                     // round-trip
    CHECK(rev_relativize(nu, tau) == relativize(sigma, tau));  // defining identity
    // relativize fan-out equals the concatenation's segment count
    CHECK(relativize(sigma, tau).fan_out() == nu.fan_out());
  }
}

TEST_CASE("precedence array accessors") {
  CHECK(pa("[1;2,1]").fan_out() == 2);
  CHECK(pa("[1;2,1]").count_of(1) == 2);
  CHECK(pa("[1;2,1]").flat() == std::vector<int>{1, 2, 1});
  CHECK(pa("[]").is_empty());
  CHECK(pa("[1,2,1]").fan_out() == 1);
}

TEST_CASE("pav serialization with inactive dimensions") {
  Pav p = Pav::parse("[[1,2]|[2,1]]");
  CHECK(p.dims() == 2);
  CHECK(p.fan_out() == 2);
  CHECK(p.str() == "[[1,2]|[2,1]]");
  Pav q = Pav::parse("[[1]|]");
  CHECK(q.arrays[1].is_empty());
  CHECK(q.str() == "[[1]|]");
  Pav wrap = Pav::parse("[[1,2;3]|[1,4,1]]");
  CHECK(wrap.fan_out() == 3);
}

TEST_CASE("join rearranges link components per dimension") {
  // three-dimensional example with five links
  Pav p = Pav::parse("[[1,2,3]|[4,2,1,5]|[3,2,4]]");
  LinkMatrix links = {
      {"A", "B", "C", "", ""},
      {"Y", "X", "", "W", "Z"},
      {"", "U", "V", "T", ""},
  };
  auto joined = join(p, links);
  REQUIRE(joined.size() == 3);
  REQUIRE(joined[0].size() == 1);
  CHECK(joined[0][0] == std::vector<JoinedSymbol>{{"A", 1}, {"B", 2}, {"C", 3}});
  CHECK(joined[1][0] == std::vector<JoinedSymbol>{{"W", 4}, {"X", 2}, {"Y", 1}, {"Z", 5}});
  CHECK(joined[2][0] == std::vector<JoinedSymbol>{{"V", 3}, {"U", 2}, {"T", 4}});
}

TEST_CASE("join of a single column") {
  auto joined = join(Pav::parse("[[1]]"), {{"X"}});
  CHECK(joined[0][0] == std::vector<JoinedSymbol>{{"X", 1}});
}

TEST_CASE("join splices discontinuous links around each other") {
  // first component has a gap between e and C; D wraps around the A
  Pav p = Pav::parse("[[1,2;3]|[1,4,1]]");
  LinkMatrix links = {
      {"A", "e", "C", ""},
      {"D", "", "", "A"},
  };
  auto joined = join(p, links);
  REQUIRE(joined[0].size() == 2);
  CHECK(joined[0][0] == std::vector<JoinedSymbol>{{"A", 1}, {"e", 2}});
  CHECK(joined[0][1] == std::vector<JoinedSymbol>{{"C", 3}});
  REQUIRE(joined[1].size() == 1);
  CHECK(joined[1][0] == std::vector<JoinedSymbol>{{"D", 1}, {"A", 4}, {"D", 1}});
}

TEST_CASE("join rejects references to inactive links") {
  CHECK_THROWS_AS(join(Pav::parse("[[1,2]]"), LinkMatrix{{"A", ""}}), MalformedProduction);
}

TEST_CASE("pav normal form orders links by first appearance") {
  // the alternative column order normalizes back to [4,2,1,5]
  Pav alt = Pav::parse("[[1,2,3]|[5,2,1,4]|[3,2,5]]");
  LinkMatrix links = {
      {"A", "B", "C", "", ""},
      {"Y", "X", "", "Z", "W"},
      {"", "U", "V", "", "T"},
  };
  NormalizedPav norm = normalize_pav(alt, links);
  CHECK(norm.pav.arrays[1].str() == "[4,2,1,5]");
  CHECK(norm.pav.arrays[2].str() == "[3,2,4]");
  CHECK(norm.links[1] == std::vector<std::string>{"Y", "X", "", "W", "Z"});
  // join output is unchanged by normalization
  CHECK(same_rhs(join(alt, links), join(norm.pav, norm.links)));
}

TEST_CASE("pav normalization is idempotent") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    // random two-link PAV over two dimensions
    std::vector<PrecedenceArray> arrays;
    LinkMatrix links(2, std::vector<std::string>(2));
    for (int d = 0; d < 2; ++d) {
      int order = coin(rng);
      arrays.push_back(pa(order ? "[1,2]" : "[2,1]"));
      links[d][0] = "A";
      links[d][1] = "B";
    }
    Pav p(arrays);
    NormalizedPav once = normalize_pav(p, links);
    NormalizedPav twice = normalize_pav(once.pav, once.links);
    CHECK(once.pav == twice.pav);
    CHECK(once.links == twice.links);
    CHECK(same_rhs(join(p, links), join(once.pav, once.links)));
  }
}

TEST_CASE("normalization rejects unreferenced links") {
  CHECK_THROWS_AS(normalize_pav(Pav::parse("[[1]]"), LinkMatrix{{"A", "B"}}),
                  MalformedProduction);
}
