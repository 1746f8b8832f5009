#include "doctest.h"
#include "floq/matrix.hpp"

using namespace floq;

TEST_CASE("rational parsing") {
  CHECK(parse_rat("3/4") == rat(3, 4));
  CHECK(parse_rat("-7/2") == rat(-7, 2));
  CHECK(parse_rat("5") == Rat(5));
  CHECK(parse_rat("0.25") == rat(1, 4));
  CHECK(to_string(rat(3, 4)) == "3/4");
  CHECK(to_string(Rat(2)) == "2");
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("abc"), Error);
}

TEST_CASE("matrix product and kron") {
  Matrix<Rat> a(2, 2), b(2, 2);
  a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
  b(0, 0) = 0; b(0, 1) = 1; b(1, 0) = 1; b(1, 1) = 0;
  auto p = a * b;
  CHECK(p(0, 0) == 2);
  CHECK(p(0, 1) == 1);
  CHECK(p(1, 0) == 4);
  CHECK(p(1, 1) == 3);
  auto k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == 1);      // a00 * b01
  CHECK(k(2, 1) == 3);      // a10 * b01
  CHECK(k(0, 0) == 0);
  CHECK(a.trace() == 5);
  CHECK(a.column_sums() == std::vector<Rat>{Rat(4), Rat(6)});
}

TEST_CASE("permutation operator swaps tensor factors") {
  auto p = permutation_op<Rat>(2);
  // |a> x |b>  ->  |b> x |a>
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(p(b * 2 + a, a * 2 + b) == 1);
  CHECK(p * p == Matrix<Rat>::identity(4));
}

TEST_CASE("embedding into a chain") {
  Matrix<Rat> u(4, 4);
  for (int i = 0; i < 4; ++i) u(i, (i + 1) % 4) = 1;
  auto id2 = Matrix<Rat>::identity(2);
  CHECK(embed_chain(u, {1, 2}, 3, 2) == kron(u, id2));
  CHECK(embed_chain(u, {2, 3}, 3, 2) == kron(id2, u));
  // reversed site order conjugates by the swap
  auto p = permutation_op<Rat>(2);
  auto direct = embed(u, {0, 1}, {2, 2});
  auto swapped = embed(u, {1, 0}, {2, 2});
  CHECK(swapped == p * direct * p);
  CHECK_THROWS_AS(embed(u, {0, 0}, {2, 2}), Error);
  CHECK_THROWS_AS(embed_chain(u, {3, 4}, 3, 2), Error);
}

TEST_CASE("partial trace and partial transpose") {
  Matrix<Rat> a(2, 2), b(3, 3);
  a(0, 0) = rat(1, 2); a(1, 1) = rat(3, 2); a(0, 1) = 5;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = rat(i + 1, j + 2);
  auto traced = partial_trace_first(kron(a, b), 2);
  CHECK(traced == b * a.trace());
  Matrix<Rat> x(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) x(i, j) = rat(3 * i + 1, j + 7);
  CHECK(partial_transpose(partial_transpose(x, 1, 3), 1, 3) == x);
  CHECK(partial_transpose(partial_transpose(x, 2, 3), 2, 3) == x);
}

TEST_CASE("inverse, linear solve, kernel") {
  Matrix<Rat> a(3, 3);
  a(0, 0) = 2; a(0, 1) = 1; a(1, 1) = 3; a(1, 2) = rat(1, 2); a(2, 0) = 1; a(2, 2) = 1;
  CHECK(invert(a) * a == Matrix<Rat>::identity(3));
  CHECK(a * invert(a) == Matrix<Rat>::identity(3));
  Matrix<Rat> s(2, 2);
  s(0, 0) = 1; s(0, 1) = 2; s(1, 0) = 2; s(1, 1) = 4;
  CHECK_THROWS_AS(invert(s), Error);

  std::vector<Rat> rhs = {Rat(3), Rat(7)};
  Matrix<Rat> sys(2, 2);
  sys(0, 0) = 1; sys(0, 1) = 1; sys(1, 0) = 1; sys(1, 1) = -1;
  auto sol = solve_unique(sys, rhs);
  CHECK(sol == std::vector<Rat>{Rat(5), Rat(-2)});

  // consistent overdetermined system
  Matrix<Rat> over(3, 2);
  over(0, 0) = 1; over(1, 1) = 1; over(2, 0) = 1; over(2, 1) = 1;
  CHECK(solve_unique(over, {Rat(2), Rat(5), Rat(7)}) == std::vector<Rat>{Rat(2), Rat(5)});
  CHECK_THROWS_AS(solve_unique(over, {Rat(2), Rat(5), Rat(8)}), Error);

  auto basis = kernel_basis(s);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0][0] * 2 + basis[0][1] * 4 == 0);
  CHECK(kernel_basis(Matrix<Rat>::identity(3)).empty());
}
