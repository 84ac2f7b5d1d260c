#include <doctest.h>

#include <random>

#include "qscar/decompose.hpp"
#include "qscar/models.hpp"
#include "qscar/scars.hpp"

using namespace qscar;

TEST_CASE("scar states have lower half-cut entropy than nearby bulk states") {
  const int L = 4;
  auto model = build_xy(L, 1.0, 0.3, 0.1);
  auto res = eigh(model.hamiltonian);
  std::set<int> half{0, 1};
  for (int n = 1; n < L; ++n) {
    auto scar = xy_scar_state(model.space, n, false);
    double e = inner(scar, model.hamiltonian * scar).real();
    double s_scar = entanglement_entropy(scar, half);
    int best = -1;
    double best_de = 0.0;
    for (long q = 0; q < res.eigenvalues.size(); ++q) {
      if (std::norm(res.eigenvectors.col(q).dot(scar.amplitudes)) > 0.5) continue;
      double de = std::abs(res.eigenvalues(q) - e);
      if (best < 0 || de < best_de) {
        best = static_cast<int>(q);
        best_de = de;
      }
    }
    REQUIRE(best >= 0);
    StateVector bulk{model.space, res.eigenvectors.col(best)};
    CHECK(s_scar < entanglement_entropy(bulk, half));
  }
  // tower endpoints are product states
  CHECK(entanglement_entropy(xy_scar_state(model.space, 0, false), half) ==
        doctest::Approx(0.0));
  CHECK(entanglement_entropy(xy_scar_state(model.space, L, false), half) ==
        doctest::Approx(0.0));
}

TEST_CASE("H_Z is permutation invariant at L=6 (sampled permutations)") {
  const int L = 6;
  auto model = build_xy(L, 1.0, 0.3, 0.1);
  auto u = gauge_unitary(model.space);
  auto gauged = u * model.hamiltonian * u.adjoint();
  auto target = TargetSubspace::from_indices(3, {0, 2});
  auto tower = make_scar_tower(target, model.space);
  auto split = split_hamiltonian(gauged, tower);

  CHECK((split.annihilator.matrix + split.zeeman.matrix - gauged.matrix)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  for (const auto& s : tower.states)
    CHECK((split.annihilator.matrix * s.amplitudes).norm() <=
          1e-9 * gauged.frobenius_norm());

  std::mt19937 rng(99);
  std::vector<int> img(L);
  std::iota(img.begin(), img.end(), 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(img.begin(), img.end(), rng);
    // sigma H_Z sigma^{-1} == H_Z, checked entrywise via the basis index map
    auto map = basis_permutation(Permutation(img), *model.space);
    double worst = 0.0;
    const auto& hz = split.zeeman.matrix;
    for (long j = 0; j < hz.cols(); ++j)
      for (long i = 0; i < hz.rows(); ++i)
        worst = std::max(worst, std::abs(hz(map[i], map[j]) - hz(i, j)));
    CHECK(worst < 1e-11);
  }

  // the L=6 Zeeman part reproduces the tower spectrum: affine fit
  auto fit = extract_zeeman(gauged, tower);
  CHECK(fit.coefficients[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(fit.constant == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(fit.residual <= 1e-9);
}
