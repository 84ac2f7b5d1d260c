#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qscar/hilbert.hpp"
#include "qscar/models.hpp"
#include "qscar/scars.hpp"

using namespace qscar;

namespace {

Matrix random_hermitian(long dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix m(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (m + Matrix(m.adjoint()));
}

}  // namespace

TEST_CASE("lattice graph validation and paths") {
  CHECK_THROWS(LatticeGraph(3, {{0, 0}}));
  CHECK_THROWS(LatticeGraph(4, {{0, 1}, {2, 3}}));  // disconnected
  auto chain = LatticeGraph::chain(5, false);
  CHECK(chain.shortest_path(0, 4) == std::vector<int>{0, 1, 2, 3, 4});
  auto ring = LatticeGraph::chain(6, true);
  CHECK(ring.shortest_path(0, 5) == std::vector<int>{0, 5});
  CHECK(ring.shortest_path(0, 2) == std::vector<int>{0, 1, 2});
  CHECK(ring.has_edge(5, 0));
}

TEST_CASE("basis ordering: site 0 slowest") {
  auto space = make_chain_space(2, 2, false);
  std::vector<int> digits(2);
  space->decode(1, digits);
  CHECK(digits == std::vector<int>{0, 1});
  space->decode(2, digits);
  CHECK(digits == std::vector<int>{1, 0});
}

TEST_CASE("embed identity is global identity") {
  auto space = make_chain_space(3, 3, true);
  auto op = embed(Matrix::Identity(3, 3), {0}, space);
  CHECK((op.matrix - Matrix::Identity(27, 27)).norm() == 0.0);
}

TEST_CASE("embed sigma_z on site 1 of two qubits") {
  auto space = make_chain_space(2, 2, false);
  auto op = embed(pauli_z(), {1}, space);
  Vector diag = op.matrix.diagonal();
  CHECK(diag(0) == Complex(1));
  CHECK(diag(1) == Complex(-1));
  CHECK(diag(2) == Complex(1));
  CHECK(diag(3) == Complex(-1));
  CHECK((op.matrix - Matrix(op.matrix.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("embed tensor factorization and errors") {
  auto space = make_chain_space(2, 2, false);
  Matrix a = random_hermitian(2, 1), b = random_hermitian(2, 2);
  auto lhs = embed(a, {0}, space) * embed(b, {1}, space);
  auto rhs = embed(oracles::kron(a, b), {0, 1}, space);
  CHECK((lhs.matrix - rhs.matrix).norm() < 1e-14);

  CHECK_THROWS(embed(a, {0, 1}, space));        // dimension mismatch
  CHECK_THROWS(embed(a, {5}, space));           // out of range
  CHECK_THROWS(embed(oracles::kron(a, b), {0, 0}, space));  // duplicate
}

TEST_CASE("embed on listed-site order matches explicit kron oracle") {
  auto space = make_chain_space(3, 2, false);
  Matrix a = random_hermitian(2, 3), b = random_hermitian(2, 4);
  // embed(A (x) B on sites [2,0]) == embed(B, 0) * embed(A, 2)
  auto lhs = embed(oracles::kron(a, b), {2, 0}, space);
  auto rhs = embed(b, {0}, space) * embed(a, {2}, space);
  CHECK((lhs.matrix - rhs.matrix).norm() < 1e-13);
}

TEST_CASE("embed homomorphism on disjoint supports commutes") {
  auto space = make_chain_space(3, 3, true);
  Matrix a = random_hermitian(3, 5), b = random_hermitian(3, 6);
  auto ab = embed(a, {0}, space) * embed(b, {2}, space);
  auto ba = embed(b, {2}, space) * embed(a, {0}, space);
  CHECK((ab.matrix - ba.matrix).norm() < 1e-13);
}

TEST_CASE("swap operator basics") {
  auto space = make_chain_space(2, 2, false);
  auto swap = swap_operator(0, 1, space);
  // permutes |01> and |10>
  CHECK(swap.matrix(2, 1) == Complex(1));
  CHECK(swap.matrix(1, 2) == Complex(1));
  CHECK(swap.matrix(0, 0) == Complex(1));
  CHECK(swap.matrix(3, 3) == Complex(1));
  auto sq = swap * swap;
  CHECK((sq.matrix - Matrix::Identity(4, 4)).norm() == 0.0);

  auto space3 = make_chain_space(3, 2, false);
  StateVector v{space3, Vector::Zero(8)};
  v.amplitudes[1] = 1.0;  // |001>
  auto w = swap_operator(0, 1, space3) * v;
  CHECK((w.amplitudes - v.amplitudes).norm() == 0.0);

  auto hetero = make_space({2, 3}, LatticeGraph::chain(2, false));
  CHECK_THROWS(swap_operator(0, 1, hetero));
}

TEST_CASE("swap conjugation moves single-site supports") {
  auto space = make_chain_space(2, 3, false);
  Matrix a = random_hermitian(3, 7);
  auto swap = swap_operator(0, 1, space);
  auto lhs = swap * embed(a, {0}, space) * swap;
  auto rhs = embed(a, {1}, space);
  CHECK((lhs.matrix - rhs.matrix).norm() < 1e-13);
}

TEST_CASE("eigh on diagonal and Pauli matrices") {
  auto space = make_chain_space(2, 2, false);
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 3.0, 1.0, 2.0, 0.5;
  auto res = eigh({space, d, {0, 1}});
  CHECK(res.eigenvalues(0) == doctest::Approx(0.5));
  CHECK(res.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(res.eigenvalues(2) == doctest::Approx(2.0));
  CHECK(res.eigenvalues(3) == doctest::Approx(3.0));

  auto single = make_chain_space(2, 2, false);
  auto sx = embed(pauli_x(), {0}, single);
  auto rx = eigh(sx);
  CHECK(rx.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(rx.eigenvalues(3) == doctest::Approx(1.0));

  Matrix nh = Matrix::Zero(4, 4);
  nh(0, 1) = 1.0;
  CHECK_THROWS(eigh({space, nh, {0, 1}}));
}

TEST_CASE("eigh reconstruction and orthonormality on random Hermitian") {
  auto space = make_chain_space(3, 2, false);
  ManyBodyOperator op{space, random_hermitian(8, 11), {0, 1, 2}};
  auto res = eigh(op);
  Matrix rebuilt = res.eigenvectors *
                   res.eigenvalues.cast<Complex>().asDiagonal() *
                   res.eigenvectors.adjoint();
  CHECK((rebuilt - op.matrix).norm() <= 1e-9 * op.matrix.norm());
  Matrix gram = res.eigenvectors.adjoint() * res.eigenvectors;
  CHECK((gram - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
  for (long k = 1; k < res.eigenvalues.size(); ++k)
    CHECK(res.eigenvalues(k) >= res.eigenvalues(k - 1));
}

TEST_CASE("eigh matches the independent Jacobi oracle on the XY Hamiltonian") {
  auto model = build_xy(4, 1.0, 0.3, 0.1);
  auto res = eigh(model.hamiltonian);
  auto oracle = oracles::jacobi_eigenvalues(model.hamiltonian.matrix);
  REQUIRE(oracle.size() == static_cast<size_t>(res.eigenvalues.size()));
  for (size_t k = 0; k < oracle.size(); ++k)
    CHECK(std::abs(oracle[k] - res.eigenvalues(k)) < 1e-8);
}

TEST_CASE("entanglement entropy basics") {
  auto space = make_chain_space(2, 2, false);
  StateVector product{space, Vector::Zero(4)};
  product.amplitudes[2] = 1.0;  // |10>
  CHECK(entanglement_entropy(product, {0}) == doctest::Approx(0.0));

  StateVector singlet{space, Vector::Zero(4)};
  singlet.amplitudes[1] = 1.0 / std::sqrt(2.0);
  singlet.amplitudes[2] = -1.0 / std::sqrt(2.0);
  CHECK(entanglement_entropy(singlet, {0}) == doctest::Approx(std::log(2.0)));
  CHECK(entanglement_entropy(singlet, {}) == 0.0);
  CHECK(entanglement_entropy(singlet, {0, 1}) == 0.0);
}

TEST_CASE("scar state half-cut entropy matches the Dicke RDM oracle") {
  const int L = 4;
  auto s2 = xy_scar_state(L, 2, true);
  double got = entanglement_entropy(s2, {0, 1});
  CHECK(got == doctest::Approx(oracles::dicke_half_cut_entropy(L, 2)).epsilon(1e-10));
  // region <-> complement symmetry, including an asymmetric cut
  auto s1 = xy_scar_state(L, 1, false);
  CHECK(entanglement_entropy(s1, {0}) ==
        doctest::Approx(entanglement_entropy(s1, {1, 2, 3})).epsilon(1e-10));
}

TEST_CASE("entropy is symmetric under region complement for random states") {
  auto space = make_chain_space(4, 2, false);
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  Vector amps(16);
  for (long i = 0; i < 16; ++i) amps[i] = Complex(dist(rng), dist(rng));
  StateVector v{space, amps / amps.norm()};
  CHECK(std::abs(entanglement_entropy(v, {0, 2}) - entanglement_entropy(v, {1, 3})) < 1e-10);
}

TEST_CASE("operators act as identity outside their support") {
  auto space = make_chain_space(3, 2, false);
  Matrix a = random_hermitian(2, 13);
  auto op = embed(a, {1}, space);
  // tracing out the support-complement of a product operator recovers a
  // multiple of the local matrix on the support
  long dim = space->dim();
  Matrix local = Matrix::Zero(2, 2);
  std::vector<int> digits(3), digits2(3);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) {
      space->decode(i, digits);
      space->decode(j, digits2);
      if (digits[0] == digits2[0] && digits[2] == digits2[2])
        local(digits[1], digits2[1]) += op.matrix(i, j);
    }
  CHECK((local / 4.0 - a).norm() < 1e-13);
}

TEST_CASE("matrix text round trip") {
  Matrix m = random_hermitian(3, 17);
  std::ostringstream os;
  write_matrix(os, m);
  std::istringstream is(os.str());
  Matrix back = read_matrix(is);
  CHECK((m - back).norm() == 0.0);
  CHECK(os.str().substr(0, 4) == "3 3\n");
}
