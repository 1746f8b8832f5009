#include "doctest.h"
#include "floq/mpa.hpp"
#include "floq/simulate.hpp"

using namespace floq;

TEST_CASE("normal form of the quadratic algebras") {
  ModelSpec sym;
  auto de = NCPolynomial::word("DE");
  auto nf = normal_form(de, sym);
  CHECK(nf.terms == std::map<std::string, Rat>{{"ED", 1}, {"D", 1}, {"E", 1}});

  ModelSpec asym;
  asym.family = Family::ASEP;
  asym.t = rat(1, 2);
  auto nfa = normal_form(de, asym);
  CHECK(nfa.terms == std::map<std::string, Rat>{{"ED", rat(1, 4)}, {"", rat(3, 4)}});

  // products reduce consistently in either order
  auto w1 = NCPolynomial::word("DED"), w2 = NCPolynomial::word("DEE");
  for (const ModelSpec* m : {&sym, &asym}) {
    auto direct = normal_form(w1 * w2, *m);
    auto staged = normal_form(normal_form(w1, *m) * normal_form(w2, *m), *m);
    CHECK(direct.terms == staged.terms);
  }
}

TEST_CASE("exchange relation for the site vectors") {
  for (Family f : {Family::SSEP, Family::ASEP, Family::FusedSSEP, Family::FusedASEP}) {
    ModelSpec m;
    m.family = f;
    m.t = rat(1, 3);
    for (auto [z1, z2] : {std::pair{rat(1, 2), rat(1, 5)}, std::pair{rat(2, 3), rat(3, 2)}}) {
      auto rep = check_zf(m, z1, z2);
      INFO(rep.model << " at " << rep.point << ": " << rep.deviation);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("boundary exchange relations") {
  for (Family f : {Family::SSEP, Family::ASEP, Family::FusedSSEP, Family::FusedASEP}) {
    ModelSpec m;
    m.family = f;
    m.t = rat(1, 3);
    m.a = rat(1, 2); m.b = rat(2, 3); m.c = rat(1, 8); m.d = rat(1, 6);
    for (Rat z : {rat(1, 2), rat(2, 5)}) {
      for (Side side : {Side::Left, Side::Right}) {
        auto rep = check_gz(m, z, side);
        INFO(rep.check << " " << rep.model << " at " << rep.point << ": " << rep.deviation);
        CHECK(rep.pass);
      }
    }
  }
}

TEST_CASE("fused site vector matches its explicit form") {
  for (Family f : {Family::FusedSSEP, Family::FusedASEP}) {
    ModelSpec m;
    m.family = f;
    m.t = rat(2, 5);
    for (Rat z : {rat(1, 2), rat(3, 4), rat(7, 3)}) {
      auto built = a_vector(m, z);
      auto printed = fused_a_explicit(m, z);
      REQUIRE(built.comp.size() == 3);
      for (int j = 0; j < 3; ++j)
        CHECK((built.comp[j] - printed.comp[j]).is_zero());
    }
  }
}

TEST_CASE("boundary closure at the reference parameters") {
  // a = b = 1, c = d = 0: both boundary relations collapse to
  // f(m,n) = f(m-1,n) = f(m,n-1), so every moment equals 1.
  ModelSpec m;
  BoundaryClosure cl(m, 6);
  CHECK(cl.f(0, 0) == 1);
  for (int n = 1; n <= 4; ++n) CHECK(cl.f(0, n) == 1);
  CHECK(cl.f(2, 3) == 1);
  CHECK(cl.scalar_eval(NCPolynomial::word("DE")) == 3);  // ED + D + E
}

TEST_CASE("boundary closure requires ab != cd") {
  ModelSpec m;
  m.a = rat(1, 2); m.b = rat(1, 2); m.c = rat(1, 2); m.d = rat(1, 2);
  CHECK_THROWS_AS(BoundaryClosure(m, 4), Error);
}

TEST_CASE("stationary state from the matrix product ansatz") {
  ModelSpec m;
  m.kappa = rat(1, 2);
  ChainSpec chain{m, 3, Boundary::Open};
  auto st = mpa_stationary(chain);
  CHECK(st.normalization == 24);
  CHECK(st.probs == stationary_eigensolve(chain));
  auto ops = build_floquet(chain);
  CHECK(ops.u_odd.apply(st.probs) == st.companion_probs);
  CHECK(ops.u_even.apply(st.companion_probs) == st.probs);

  ChainSpec periodic{m, 4, Boundary::Periodic};
  CHECK_THROWS_AS(mpa_stationary(periodic), Error);
}
