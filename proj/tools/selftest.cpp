#include "selftest.hpp"

#include <random>

#include "qscar/decompose.hpp"
#include "qscar/models.hpp"
#include "qscar/permrep.hpp"
#include "qscar/scars.hpp"

namespace qscar {

namespace {

Matrix random_hermitian(long dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix m(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (m + Matrix(m.adjoint()));
}

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

void run_selftest(Report& report) {
  // exact group-algebra identities, N <= 4
  {
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
      auto tabs = all_standard(n);
      for (size_t i = 0; i < tabs.size(); ++i) {
        auto ci = young_symmetrizer(tabs[i]);
        auto c2 = ga_multiply(ci, ci);
        auto scaled = Rational(factorial(n), dim_irrep(tabs[i].diagram)) * ci;
        if (!(c2 == scaled)) worst = 1.0;
        for (size_t j = 0; j < tabs.size(); ++j) {
          if (i == j) continue;
          if (!ga_multiply(ci, young_symmetrizer(tabs[j])).is_zero()) worst = 1.0;
        }
      }
    }
    report.check("young-symmetrizer identities N<=4 (exact)", worst == 0.0, worst, 0.5);
  }

  // telescoping identity, path lengths <= 3
  {
    double worst = 0.0;
    for (int len = 1; len <= 3; ++len) {
      int n = len + 1;
      auto graph = LatticeGraph::chain(n, false);
      GroupAlgebraElement acc(n);
      for (const auto& term : telescoped_transposition(0, len, graph, n)) {
        auto t = Permutation::transposition(n, term.edge.first, term.edge.second);
        acc += ga_multiply(GroupAlgebraElement::of(term.prefix),
                           GroupAlgebraElement::unit(n) - GroupAlgebraElement::of(t));
      }
      auto expect = GroupAlgebraElement::unit(n) -
                    GroupAlgebraElement::of(Permutation::transposition(n, 0, len));
      if (!(acc == expect)) worst = 1.0;
    }
    report.check("telescoping identity (exact, len<=3)", worst == 0.0, worst, 0.5);
  }

  // embed algebra and swap conjugation
  {
    auto space = make_chain_space(3, 2, false);
    Matrix a = random_hermitian(2, 101), b = random_hermitian(2, 102);
    double r1 = (embed(a, {0}, space).matrix * embed(b, {2}, space).matrix -
                 embed(b, {2}, space).matrix * embed(a, {0}, space).matrix)
                    .norm();
    auto swap = swap_operator(0, 1, space);
    double r2 = (swap.matrix * embed(a, {0}, space).matrix * swap.matrix -
                 embed(a, {1}, space).matrix)
                    .norm();
    report.check("embed disjoint-support commutation", r1 <= 1e-12, r1, 1e-12);
    report.check("swap conjugation moves supports", r2 <= 1e-12, r2, 1e-12);
  }

  // eigh reconstruction
  {
    auto space = make_chain_space(4, 2, false);
    ManyBodyOperator op{space, random_hermitian(16, 103), {0, 1, 2, 3}};
    auto res = eigh(op);
    double r = (res.eigenvectors * res.eigenvalues.cast<Complex>().asDiagonal() *
                    res.eigenvectors.adjoint() -
                op.matrix)
                   .norm() /
               op.matrix.norm();
    report.check("eigh reconstruction", r <= 1e-9, r, 1e-9);
  }

  // entropy complement symmetry
  {
    auto space = make_chain_space(4, 2, false);
    std::mt19937 rng(104);
    std::normal_distribution<double> dist;
    Vector amps(16);
    for (long i = 0; i < 16; ++i) amps[i] = Complex(dist(rng), dist(rng));
    StateVector v{space, amps / amps.norm()};
    double r = std::abs(entanglement_entropy(v, {0, 3}) - entanglement_entropy(v, {1, 2}));
    report.check("entropy complement symmetry", r <= 1e-10, r, 1e-10);
  }

  // resolution of identity on three qubits
  {
    auto space = make_chain_space(3, 2, false);
    Matrix sum = Matrix::Zero(8, 8);
    for (const auto& term : young_resolution(3))
      sum += represent(term.u, space, Side::right).matrix;
    double r = (sum - Matrix::Identity(8, 8)).norm();
    report.check("young resolution represents to identity (N=3,d=2)", r <= 1e-12, r, 1e-12);
  }

  // XY L=4: tower, conjugation identity, decomposition round trip
  {
    const int L = 4;
    const double J = 1.0, h = 0.3, D = 0.1;
    auto model = build_xy(L, J, h, D);
    double scale = model.hamiltonian.frobenius_norm();
    double r_tower = 0.0;
    for (int n = 0; n <= L; ++n) {
      auto s = xy_scar_state(model.space, n, false);
      double e = h * (2 * n - L) + D * L;
      r_tower = std::max(
          r_tower, (model.hamiltonian.matrix * s.amplitudes - e * s.amplitudes).norm() / scale);
    }
    report.check("xy tower eigenstates (L=4)", r_tower <= 1e-10, r_tower, 1e-10);

    auto u = gauge_unitary(model.space);
    auto gauged = u * model.hamiltonian * u.adjoint();
    auto sm = xy_sm_terms(L, J, h, D);
    ManyBodyOperator rhs{model.space, Matrix::Zero(81, 81), {}};
    for (const auto& bond : sm.bonds) {
      std::vector<int> sites{bond.edge.first, bond.edge.second};
      rhs += embed(bond.h1 * bond.p1 + bond.h2 * bond.p2, sites, model.space);
    }
    for (int x = 0; x < L; ++x) rhs += embed(sm.onsite[x], {x}, model.space);
    double r_conj = (gauged.matrix - rhs.matrix).cwiseAbs().maxCoeff();
    report.check("xy conjugation identity (L=4)", r_conj <= 1e-12, r_conj, 1e-12);

    auto target = TargetSubspace::from_indices(3, {0, 2});
    auto tower = make_scar_tower(target, model.space);
    auto split = split_hamiltonian(gauged, tower);
    auto decomp = local_projector_decomposition(split.annihilator, target, tower);
    auto cert = decomposition_certificate(decomp, split.annihilator, tower);
    report.check("xy annihilator decomposition certificate (L=4)", cert.all_passed(),
                 cert.max_residual(), 1e-9);
  }

  // DM N=4: symmetrization vanishes, decomposition, class sums
  {
    auto dm = build_dm_chain(4, true);
    double r_sym = symmetrize(dm.hamiltonian).matrix.cwiseAbs().maxCoeff();
    report.check("dm chain symmetrizes to zero (N=4)", r_sym <= 1e-12, r_sym, 1e-12);

    auto target = TargetSubspace::full(2);
    auto tower = make_scar_tower(target, dm.space);
    auto decomp = local_projector_decomposition(dm.hamiltonian, target, tower);
    auto cert = decomposition_certificate(decomp, dm.hamiltonian, tower);
    report.check("dm decomposition certificate (N=4)", cert.all_passed(),
                 cert.max_residual(), 1e-9);

    auto split = local_split(dm.spec.assembled_terms(dm.space), target);
    std::vector<ManyBodyOperator> h_non;
    for (const auto& rec : split.records) h_non.push_back(rec.weight_non_preserving);
    auto dmrep = dm_constraint_check(h_non, target, tower);
    report.check("dm class-sum constraint (N=4)", dmrep.all_passed(), dmrep.max_residual(),
                 1e-10);
  }
}

}  // namespace qscar
