#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "qscar/permrep.hpp"

using namespace qscar;

namespace {

std::vector<YoungTableau> all_standard(int n) {
  std::vector<YoungTableau> out;
  for (const auto& shape : partitions_of(n))
    for (auto& t : standard_tableaux(shape)) out.push_back(std::move(t));
  return out;
}

long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

TEST_CASE("permutation composition, inverse, sign") {
  auto s = Permutation({1, 2, 0});  // 3-cycle
  CHECK(s.sign() == 1);
  CHECK(Permutation::transposition(3, 0, 2).sign() == -1);
  CHECK(s.compose(s.inverse()) == Permutation::identity(3));
  // (s o t)(x) = s(t(x))
  auto t = Permutation::transposition(3, 0, 1);
  CHECK(s.compose(t)(0) == s(t(0)));
  CHECK_THROWS(Permutation({0, 0, 1}));
}

TEST_CASE("standard tableaux counts") {
  CHECK(standard_tableaux(YoungDiagram({4})).size() == 1);
  CHECK(standard_tableaux(YoungDiagram({2, 1})).size() == 2);
  CHECK(standard_tableaux(YoungDiagram({3, 2})).size() == 5);
  // lexicographic row-word order, serialized 1-based
  auto tabs = standard_tableaux(YoungDiagram({2, 1}));
  CHECK(to_string(tabs[0]) == "[[1,2],[3]]");
  CHECK(to_string(tabs[1]) == "[[1,3],[2]]");
}

TEST_CASE("dim_irrep: hook lengths agree with enumeration") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& shape : partitions_of(n))
      CHECK(dim_irrep(shape) == static_cast<long>(standard_tableaux(shape).size()));
}

TEST_CASE("regular representation dimension identity") {
  for (int n = 2; n <= 6; ++n) {
    long total = 0;
    for (const auto& shape : partitions_of(n)) {
      long d = dim_irrep(shape);
      total += d * d;
    }
    CHECK(total == factorial(n));
  }
}

TEST_CASE("row and column groups of the (3,2) tableau from the figure") {
  // T = [[1,3,4],[2,5]]: P_T ~ S3 x S2 on {1,3,4} and {2,5}; Q_T ~ S2 x S2
  YoungTableau t(YoungDiagram({3, 2}), {{0, 2, 3}, {1, 4}});
  REQUIRE(t.is_standard());
  auto p = row_group(t);
  auto q = col_group(t);
  CHECK(p.size() == 12);
  CHECK(q.size() == 4);
  for (const auto& sigma : p) {
    std::set<int> row0{0, 2, 3};
    for (int e : row0) CHECK(row0.count(sigma(e)) == 1);
  }
  // closure under composition
  std::set<Permutation> pset(p.begin(), p.end());
  for (const auto& a : p)
    for (const auto& b : p) CHECK(pset.count(a.compose(b)) == 1);
}

TEST_CASE("trivial groups for one-row and one-column tableaux") {
  YoungTableau row(YoungDiagram({3}), {{0, 1, 2}});
  CHECK(col_group(row).size() == 1);
  YoungTableau col(YoungDiagram({1, 1, 1}), {{0}, {1}, {2}});
  CHECK(row_group(col).size() == 1);
}

TEST_CASE("young symmetrizer small cases") {
  YoungTableau sym2(YoungDiagram({2}), {{0, 1}});
  auto c = young_symmetrizer(sym2);
  CHECK(c.coefficient(Permutation::identity(2)) == Rational(1));
  CHECK(c.coefficient(Permutation::transposition(2, 0, 1)) == Rational(1));

  YoungTableau asym2(YoungDiagram({1, 1}), {{0}, {1}});
  auto ca = young_symmetrizer(asym2);
  CHECK(ca.coefficient(Permutation::identity(2)) == Rational(1));
  CHECK(ca.coefficient(Permutation::transposition(2, 0, 1)) == Rational(-1));

  // N=3 shape (2,1), first row {1,2}: c = (1 + t12)(1 - t13)
  YoungTableau t21(YoungDiagram({2, 1}), {{0, 1}, {2}});
  auto c21 = young_symmetrizer(t21);
  auto expect = ga_multiply(
      GroupAlgebraElement::unit(3) + GroupAlgebraElement::of(Permutation::transposition(3, 0, 1)),
      GroupAlgebraElement::unit(3) - GroupAlgebraElement::of(Permutation::transposition(3, 0, 2)));
  CHECK(c21 == expect);
  CHECK(c21.term_count() <= 6);
  CHECK(c21.coefficient(Permutation::identity(3)) == Rational(1));
}

TEST_CASE("group algebra unit and degree mismatch") {
  auto a = GroupAlgebraElement::of(Permutation({1, 0, 2}), Rational(3, 2));
  CHECK(ga_multiply(a, GroupAlgebraElement::unit(3)) == a);
  CHECK_THROWS(ga_multiply(a, GroupAlgebraElement::unit(4)));
}

TEST_CASE("young symmetrizer idempotency c^2 = (N!/dim) c, N <= 5") {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& t : all_standard(n)) {
      auto c = young_symmetrizer(t);
      auto c2 = ga_multiply(c, c);
      Rational scale(factorial(n), dim_irrep(t.diagram));
      CHECK(c2 == scale * c);
    }
  }
}

TEST_CASE("orthogonality of distinct-tableau symmetrizers: exact status at N <= 5") {
  // All ordered pairs vanish for N <= 4. At N = 5 exactly two ordered
  // same-shape pairs are nonzero; they are pinned here explicitly.
  for (int n = 2; n <= 4; ++n) {
    auto tabs = all_standard(n);
    for (size_t i = 0; i < tabs.size(); ++i)
      for (size_t j = 0; j < tabs.size(); ++j) {
        if (i == j) continue;
        CHECK(ga_multiply(young_symmetrizer(tabs[i]), young_symmetrizer(tabs[j])).is_zero());
      }
  }

  auto tabs5 = all_standard(5);
  std::set<std::pair<std::string, std::string>> nonzero;
  for (size_t i = 0; i < tabs5.size(); ++i)
    for (size_t j = 0; j < tabs5.size(); ++j) {
      if (i == j) continue;
      if (!ga_multiply(young_symmetrizer(tabs5[i]), young_symmetrizer(tabs5[j])).is_zero())
        nonzero.insert({to_string(tabs5[i]), to_string(tabs5[j])});
    }
  std::set<std::pair<std::string, std::string>> expected{
      {"[[1,2,3],[4,5]]", "[[1,3,5],[2,4]]"},
      {"[[1,2],[3,4],[5]]", "[[1,4],[2,5],[3]]"}};
  CHECK(nonzero == expected);
}

TEST_CASE("fixed point property p c_T (sgn q) q = c_T, N <= 5") {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& t : all_standard(n)) {
      auto c = young_symmetrizer(t);
      for (const auto& p : row_group(t))
        for (const auto& q : col_group(t)) {
          auto lhs = ga_multiply(GroupAlgebraElement::of(p),
                                 ga_multiply(c, GroupAlgebraElement::of(q, Rational(q.sign()))));
          CHECK(lhs == c);
        }
    }
  }
}

TEST_CASE("young resolution: sum u_T = 1 and u_T = (dim/N!) c_T for N <= 4") {
  for (int n = 2; n <= 5; ++n) {
    auto res = young_resolution(n);
    GroupAlgebraElement total(n);
    int deviating = 0;
    for (const auto& term : res) {
      total += term.u;
      auto e = Rational(dim_irrep(term.tableau.diagram), factorial(n)) *
               young_symmetrizer(term.tableau);
      if (!(term.u == e)) ++deviating;
    }
    CHECK(total == GroupAlgebraElement::unit(n));
    if (n <= 4) CHECK(deviating == 0);
    if (n == 5) CHECK(deviating == 2);
  }
  CHECK_THROWS(young_resolution(6));
}

TEST_CASE("representation conventions on qubits") {
  auto space = make_chain_space(3, 2, false);
  // transpositions represent to swaps on either side
  auto t01 = Permutation::transposition(3, 0, 1);
  auto left = represent(t01, space, Side::left);
  auto right = represent(t01, space, Side::right);
  auto swap = swap_operator(0, 1, space);
  CHECK((left.matrix - swap.matrix).norm() == 0.0);
  CHECK((right.matrix - swap.matrix).norm() == 0.0);

  // right action is a homomorphism, left is an anti-homomorphism (S3, exhaustive)
  for (const auto& s : all_permutations(3))
    for (const auto& t : all_permutations(3)) {
      auto st = s.compose(t);
      CHECK((represent(st, space, Side::right).matrix -
             represent(s, space, Side::right).matrix * represent(t, space, Side::right).matrix)
                .norm() == 0.0);
      CHECK((represent(st, space, Side::left).matrix -
             represent(t, space, Side::left).matrix * represent(s, space, Side::left).matrix)
                .norm() == 0.0);
    }

  auto hetero = make_space({2, 3}, LatticeGraph::chain(2, false));
  CHECK_THROWS(represent(t01, hetero, Side::left));
}

TEST_CASE("represent is linear and a right-action algebra homomorphism") {
  auto space = make_chain_space(3, 2, false);
  GroupAlgebraElement a(3), b(3);
  a.add_term(Permutation({1, 2, 0}), Rational(2, 3));
  a.add_term(Permutation::transposition(3, 0, 2), Rational(-1));
  b.add_term(Permutation({2, 0, 1}), Rational(1, 2));
  b.add_term(Permutation::identity(3), Rational(5));
  auto lhs = represent(ga_multiply(a, b), space, Side::right);
  auto rhs = represent(a, space, Side::right) * represent(b, space, Side::right);
  CHECK((lhs.matrix - rhs.matrix).norm() < 1e-13);
}

TEST_CASE("symmetric projector from the one-row symmetrizer") {
  auto space = make_chain_space(2, 2, false);
  GroupAlgebraElement avg(2);
  for (const auto& p : all_permutations(2)) avg.add_term(p, Rational(1, 2));
  auto proj = represent(avg, space, Side::right);
  CHECK((proj.matrix * proj.matrix - proj.matrix).norm() < 1e-14);
  CHECK(std::lround(proj.matrix.trace().real()) == 3);  // C(2+2-1, 2-1) = 3
}

TEST_CASE("young resolution resolves the identity on three qubits") {
  auto space = make_chain_space(3, 2, false);
  Matrix sum = Matrix::Zero(8, 8);
  // orthogonalized projectors onto the images of the c_T^R
  Matrix basis(8, 0);
  for (const auto& term : young_resolution(3)) {
    auto c = represent(GroupAlgebraElement(young_symmetrizer(term.tableau)), space, Side::right);
    Eigen::ColPivHouseholderQR<Matrix> qr(c.matrix);
    long rank = qr.rank();
    if (rank == 0) continue;  // vanishing representation (too few local levels)
    Matrix q = qr.householderQ() * Matrix::Identity(8, 8);
    Matrix img = q.leftCols(rank);
    // project out previously accumulated images
    if (basis.cols() > 0) img -= basis * (basis.adjoint() * img);
    Eigen::ColPivHouseholderQR<Matrix> qr2(img);
    long rank2 = qr2.rank();
    Matrix q2 = qr2.householderQ() * Matrix::Identity(8, 8);
    Matrix ortho = q2.leftCols(rank2);
    if (rank2 == 0) continue;
    Matrix grown(8, basis.cols() + ortho.cols());
    if (basis.cols() > 0) grown.leftCols(basis.cols()) = basis;
    if (ortho.cols() > 0) grown.rightCols(ortho.cols()) = ortho;
    basis = grown;
    sum += ortho * ortho.adjoint();
  }
  Eigen::FullPivLU<Matrix> lu(sum);
  CHECK(lu.rank() == 8);
  CHECK((sum - Matrix::Identity(8, 8)).norm() < 1e-10);
}

TEST_CASE("young orthogonal representation is a homomorphism for S3 and S4") {
  for (int n : {3, 4}) {
    for (const auto& shape : partitions_of(n)) {
      YoungOrthogonalRep rep(shape);
      auto perms = all_permutations(n);
      for (const auto& s : perms) {
        RealMatrix rs = rep.matrix(s);
        CHECK((rs * rs.transpose() - RealMatrix::Identity(rep.dim(), rep.dim())).norm() < 1e-12);
      }
      for (size_t i = 0; i < perms.size(); i += 3)
        for (size_t j = 0; j < perms.size(); j += 2) {
          RealMatrix lhs = rep.matrix(perms[i].compose(perms[j]));
          RealMatrix rhs = rep.matrix(perms[i]) * rep.matrix(perms[j]);
          CHECK((lhs - rhs).norm() < 1e-12);
        }
    }
  }
}

TEST_CASE("trivial multiplicity in induced representations") {
  CHECK(trivial_multiplicity_outer(YoungDiagram({2}), YoungDiagram({1})) == 1);
  CHECK(trivial_multiplicity_outer(YoungDiagram({1, 1}), YoungDiagram({1})) == 0);
  CHECK(trivial_multiplicity_outer(YoungDiagram({2, 1}), YoungDiagram({2})) == 0);
  CHECK_THROWS(trivial_multiplicity_outer(YoungDiagram({4}), YoungDiagram({4})));
}

TEST_CASE("trivial multiplicity matches the two-trivial-constituents rule") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 2; ++m)
      for (const auto& lambda : partitions_of(n))
        for (const auto& mu : partitions_of(m)) {
          long expect = (lambda.num_rows() == 1 && mu.num_rows() == 1) ? 1 : 0;
          CHECK(trivial_multiplicity_outer(lambda, mu) == expect);
        }
}

TEST_CASE("group algebra serialization") {
  GroupAlgebraElement a(3);
  a.add_term(Permutation::identity(3), Rational(1, 2));
  auto s = to_string(a);
  CHECK(s == "1/2 : 0 1 2\n");
}
