#pragma once

#include <vector>

#include "qscar/hilbert.hpp"
#include "qscar/permrep.hpp"
#include "qscar/report.hpp"
#include "qscar/scars.hpp"

namespace qscar {

/// S(O) = (1/N!) sum_sigma sigma_hat O sigma_hat^{-1}; the orthogonal
/// superoperator projection onto the permutation commutant.
ManyBodyOperator symmetrize(const ManyBodyOperator& op);

/// Thrown when a Hamiltonian fails to preserve the scar manifold.
struct InvarianceError : std::runtime_error {
  int state_index;
  double residual;
  InvarianceError(int state_index, const std::string& label, double residual);
};

struct HamiltonianSplit {
  ManyBodyOperator annihilator;  // H_A = H - S(H)
  ManyBodyOperator zeeman;       // H_Z = S(H)
  double invariance_residual;
};

/// H = H_A + H_Z with H_A annihilating the scar manifold. Throws
/// InvarianceError if H does not preserve the manifold within
/// rel_tol * ||H||_F.
HamiltonianSplit split_hamiltonian(const ManyBodyOperator& H, const ScarTower& tower,
                                   double rel_tol = 1e-9);

enum class TermKind { one_site, two_site_swap, off_target };

struct DecompositionTerm {
  ManyBodyOperator coefficient;
  ManyBodyOperator projector;  // Hermitian idempotent annihilating the tower
  std::set<int> support;       // projector support
  TermKind kind;
};

struct ProjectorDecomposition {
  std::vector<DecompositionTerm> terms;
  double residual;  // ||O - sum coeff*proj||_F
};

/// Constructive local-projector decomposition of an annihilator of the scar
/// manifold: off-target inclusion-exclusion terms plus, per standard tableau
/// != (N), telescoped terms ending in a nearest-neighbor (1-SWAP)/2.
/// Requires N <= 5 sites (exact Young resolution).
ProjectorDecomposition local_projector_decomposition(const ManyBodyOperator& O,
                                                     const TargetSubspace& target,
                                                     const ScarTower& tower,
                                                     double rel_tol = 1e-9);

/// Certificate checks for a decomposition: reconstruction, per-projector
/// Hermitian idempotency and tower annihilation, edge supports.
CheckReport decomposition_certificate(const ProjectorDecomposition& decomp,
                                      const ManyBodyOperator& O, const ScarTower& tower,
                                      double rel_tol = 1e-9, double proj_tol = 1e-10);

/// Exact telescoping of a distant transposition along a graph path:
/// 1 - t_{a,b} = sum_k prefix_k (1 - t_{edge_k}) with every edge_k a graph
/// edge. Returns the (prefix, edge) list.
struct TelescopeTerm {
  Permutation prefix;
  std::pair<int, int> edge;
};
std::vector<TelescopeTerm> telescoped_transposition(int a, int b, const LatticeGraph& graph,
                                                    int degree);

/// Coset split of the column antisymmetrizer: c_T = g_T (1 - t_{a,b}) with
/// (a,b) the top two entries of the first column.
struct CosetSplit {
  GroupAlgebraElement prefix;  // g_T
  int a, b;
};
CosetSplit coset_split(const YoungTableau& t);

struct LocalSplitRecord {
  std::set<int> region;
  ManyBodyOperator off_target;              // h_X (1 - P^s_X)
  ManyBodyOperator leakage;                 // (1 - P^s_X) h_X P^s_X
  ManyBodyOperator in_target;               // P^s_X h_X P^s_X
  ManyBodyOperator young_head;              // in_target * local symmetrizer
  ManyBodyOperator young_tail;              // in_target - young_head
  ManyBodyOperator weight_preserving;       // h_X^cons
  ManyBodyOperator weight_non_preserving;   // h_X^non
};

struct LocalSplit {
  std::vector<LocalSplitRecord> records;
};

/// Per-region split of local Hamiltonian terms (Eq.-level identities are
/// exact by construction; see the certificate helpers in tests).
LocalSplit local_split(const std::vector<std::pair<ManyBodyOperator, std::set<int>>>& terms,
                       const TargetSubspace& target);

/// Factorization of a weight-preserving operator on the target product space
/// into diagonal product-basis projectors times permutation operators:
/// O = sum_k coeff_k |config_k><config_k| pi_k_hat.
struct CartanFactorTerm {
  Complex coeff;
  std::vector<int> config;  // target-basis labels per site
  Permutation perm;
};
std::vector<CartanFactorTerm> cartan_permutation_factorization(const ManyBodyOperator& O,
                                                               const TargetSubspace& target,
                                                               double tol = 1e-10);

/// d_s = 2 clause: any operator on the target product space factors as
/// (diagonal projectors) x (sigma^+/- monomial) x (permutation).
struct LadderFactorTerm {
  Complex coeff;
  int sector;                    // +1 raising, -1 lowering, 0 diagonal
  std::vector<int> ladder_sites; // sites carrying sigma^+/- factors
  std::vector<int> ket_config;   // full ket labels (0 = up, 1 = down)
  Permutation perm;
};
std::vector<LadderFactorTerm> ladder_permutation_factorization(const ManyBodyOperator& O,
                                                               const TargetSubspace& target,
                                                               double tol = 1e-12);

struct ZeemanFit {
  std::vector<double> coefficients;  // h_i per Cartan direction
  double constant;
  double residual;                   // max |E_m - fit|
  std::vector<double> energies;      // tower eigenvalues
};

/// Fits tower eigenvalues to the affine Zeeman model c + sum_i h_i m^i.
/// Throws if any tower state is not an eigenstate within rel_tol * ||H||_F.
ZeemanFit extract_zeeman(const ManyBodyOperator& H, const ScarTower& tower,
                         double rel_tol = 1e-9);

/// Q-selection-rule verification (grouped leakage annihilation and the
/// containment/zero action pattern of Q_Y on leakage images).
CheckReport q_selection_rule_check(
    const std::vector<std::pair<ManyBodyOperator, std::set<int>>>& terms,
    const TargetSubspace& target, const ScarTower& tower, double tol = 1e-10);

/// DM-type constraint on the weight-non-preserving sector (d_s = 2):
/// per class (a = #ladder, b = #sigma^3, sign) the scalar coefficient sum
/// vanishes and the symmetrized class sum annihilates the tower; plus the
/// Vandermonde full-rank condition.
CheckReport dm_constraint_check(const std::vector<ManyBodyOperator>& h_non_terms,
                                const TargetSubspace& target, const ScarTower& tower,
                                double tol = 1e-10);

/// Rank of the Vandermonde-type matrix (m^a) over m in [-j+b, j] for the
/// l = 2j+1 dimensional representation; full column rank certifies the
/// linear-independence lemma for powers a with a + b < l.
bool vandermonde_full_rank(int l, int b);

}  // namespace qscar
