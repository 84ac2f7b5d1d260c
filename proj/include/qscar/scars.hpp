#pragma once

#include <string>
#include <vector>

#include "qscar/hilbert.hpp"

namespace qscar {

/// On-site target subspace h^s of C^d together with the standard sl(d_s)
/// Cartan/ladder data on it. Cartan generators are diag(...,1,-1,...), the
/// simple-root raising operators are E_i = |i><i+1|, and the first basis
/// vector is the highest-weight state.
class TargetSubspace {
 public:
  TargetSubspace(int parent_dim, Matrix basis);

  static TargetSubspace full(int d);
  static TargetSubspace from_indices(int d, const std::vector<int>& indices);

  int parent_dim() const { return parent_dim_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  int num_cartans() const { return dim() - 1; }
  Matrix cartan(int i) const;   // d_s x d_s
  Matrix raising(int i) const;  // |i><i+1|
  Matrix lowering(int i) const;

  /// Lift an operator on the target space into C^d (zero on the complement).
  Matrix lift(const Matrix& on_target) const;

  /// Weight vector of target basis label j under the Cartan generators.
  std::vector<int> label_weight(int j) const;

  /// Deterministic orthonormal completion of the target basis in C^d.
  Matrix complement_basis() const;

 private:
  int parent_dim_;
  Matrix basis_;  // parent_dim x d_s, orthonormal columns
};

/// Per-site weight labels (indices into the target weight basis).
struct WeightConfig {
  std::vector<int> labels;

  static WeightConfig parse(const std::string& text);
  std::string to_string() const;
  std::vector<int> total_weight(const TargetSubspace& target) const;
  std::vector<int> label_counts(const TargetSubspace& target) const;
};

/// Projector onto h^s at site x / on all sites of region X.
ManyBodyOperator site_projector(const TargetSubspace& target, SpacePtr space, int x);
ManyBodyOperator region_projector(const TargetSubspace& target, SpacePtr space,
                                  const std::set<int>& region);

/// Sum over sites of the lifted single-site generator.
ManyBodyOperator collective_operator(const TargetSubspace& target, SpacePtr space,
                                     const Matrix& generator);

/// Totally symmetric weight-basis state: normalized equal-amplitude
/// superposition over the permutation orbit of the product configuration,
/// with the lexicographically smallest contributing product-basis amplitude
/// real positive.
StateVector weight_basis_state(const TargetSubspace& target, SpacePtr space,
                               const WeightConfig& config);

/// Same state built by collective lowering from the highest-weight product
/// state (cross-check path for the weight-basis construction).
StateVector lowered_state(const TargetSubspace& target, SpacePtr space,
                          const WeightConfig& config);

/// Orthogonal projector onto Sym^N(h^s).
ManyBodyOperator sym_projector(const TargetSubspace& target, SpacePtr space);

/// The scar tower: all totally symmetric weight-basis states, orthonormal,
/// enumerated in a fixed order (ascending count of the highest-weight label).
struct ScarTower {
  SpacePtr space;
  TargetSubspace target;
  std::vector<StateVector> states;
  std::vector<std::vector<int>> total_weights;
  std::vector<WeightConfig> configs;

  int size() const { return static_cast<int>(states.size()); }
  /// dim x size matrix of tower state columns.
  Matrix state_matrix() const;
};

ScarTower make_scar_tower(const TargetSubspace& target, SpacePtr space);

/// Spin-1 XY scar states on a periodic chain of even length L.
/// gauged=false: |S^pi_n> with staggered (-1)^x phases (x = 1..L);
/// gauged=true: |S_n>, the Dicke state over {|+>,|->} with n raised sites.
/// The relative phase is fixed so that U|S^pi_n> = |S_n> exactly.
StateVector xy_scar_state(SpacePtr space, int n, bool gauged);
StateVector xy_scar_state(int L, int n, bool gauged);

}  // namespace qscar
