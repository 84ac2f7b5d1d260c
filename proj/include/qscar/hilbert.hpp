#pragma once

#include <iosfwd>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "qscar/types.hpp"

namespace qscar {

/// Simple undirected graph on sites 0..num_sites-1. Connected, no self-loops.
class LatticeGraph {
 public:
  LatticeGraph(int num_sites, std::set<std::pair<int, int>> edges);

  static LatticeGraph chain(int num_sites, bool periodic);

  int num_sites() const { return num_sites_; }
  const std::set<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int a, int b) const;
  std::vector<int> neighbors(int x) const;

  /// Shortest path from a to b (inclusive), BFS with ascending-neighbor
  /// tie-breaking so the result is deterministic.
  std::vector<int> shortest_path(int a, int b) const;

 private:
  int num_sites_;
  std::set<std::pair<int, int>> edges_;  // stored with first < second
};

/// Tensor-product Hilbert space: per-site local dimensions plus a lattice
/// graph. Basis ordering is the lexicographic product basis with site 0 as
/// the slowest-varying index.
class HilbertSpace {
 public:
  HilbertSpace(std::vector<int> site_dims, LatticeGraph graph);

  int num_sites() const { return static_cast<int>(site_dims_.size()); }
  int site_dim(int x) const { return site_dims_.at(x); }
  const std::vector<int>& site_dims() const { return site_dims_; }
  const LatticeGraph& graph() const { return graph_; }
  long dim() const { return dim_; }
  bool homogeneous() const;

  void decode(long index, std::span<int> digits) const;
  long encode(std::span<const int> digits) const;
  long stride(int site) const { return strides_.at(site); }

  bool same_as(const HilbertSpace& other) const;

 private:
  std::vector<int> site_dims_;
  LatticeGraph graph_;
  std::vector<long> strides_;
  long dim_;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

SpacePtr make_space(std::vector<int> site_dims, LatticeGraph graph);
/// Homogeneous chain of N sites with local dimension d.
SpacePtr make_chain_space(int num_sites, int local_dim, bool periodic);

/// Dense operator on a HilbertSpace, tagged with the set of sites it acts on
/// non-trivially (identity outside `support`).
struct ManyBodyOperator {
  SpacePtr space;
  Matrix matrix;
  std::set<int> support;

  ManyBodyOperator adjoint() const;
  double frobenius_norm() const { return matrix.norm(); }
  double max_abs() const;
  bool is_hermitian(double tol = 1e-10) const;

  ManyBodyOperator& operator+=(const ManyBodyOperator& o);
  ManyBodyOperator& operator-=(const ManyBodyOperator& o);
};

ManyBodyOperator operator+(ManyBodyOperator a, const ManyBodyOperator& b);
ManyBodyOperator operator-(ManyBodyOperator a, const ManyBodyOperator& b);
ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b);
ManyBodyOperator operator*(Complex c, ManyBodyOperator a);

struct StateVector {
  SpacePtr space;
  Vector amplitudes;

  double norm() const { return amplitudes.norm(); }
  StateVector normalized() const;
};

StateVector operator*(const ManyBodyOperator& op, const StateVector& v);
Complex inner(const StateVector& a, const StateVector& b);

ManyBodyOperator identity_operator(SpacePtr space);

/// Embeds `local_op`, given on the joint space of `sites` (first listed site
/// slowest), into the full space; identity elsewhere.
ManyBodyOperator embed(const Matrix& local_op, const std::vector<int>& sites,
                       SpacePtr space);

/// SWAP of sites x and y (requires equal local dimensions).
ManyBodyOperator swap_operator(int x, int y, SpacePtr space);

struct EighResult {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns
};

/// Dense Hermitian eigensolve. Throws if the operator is not Hermitian
/// within 1e-10 (max absolute entry of A - A^dag).
EighResult eigh(const ManyBodyOperator& op);

/// Reduced density matrix of a pure state on `region` (sites ascending).
Matrix reduced_density_matrix(const StateVector& state, const std::set<int>& region);

/// Von Neumann entropy (natural log) of the reduced state on `region`.
/// Empty or full region returns 0 by convention.
double entanglement_entropy(const StateVector& state, const std::set<int>& region);

/// Text matrix format: first line "rows cols", then one row per line with
/// "re im" entries separated by single spaces, 17 significant digits.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

}  // namespace qscar
