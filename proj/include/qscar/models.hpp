#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qscar/hilbert.hpp"
#include "qscar/scars.hpp"

namespace qscar {

// Spin-1 matrices in the basis (|+>,|0>,|->), S3 = diag(1,0,-1),
// S+|-> = sqrt(2)|0>, S+|0> = sqrt(2)|+>.
Matrix spin1_sx();
Matrix spin1_sy();
Matrix spin1_sz();
Matrix spin1_sp();

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix pauli_plus();
Matrix pauli_minus();

struct ModelTerm {
  std::vector<int> sites;   // 0-based, ordered as the matrix's tensor slots
  Matrix matrix;            // dim = product of the sites' local dims
  std::string coupling;     // empty = fixed scale 1
};

struct ModelSpec {
  LatticeGraph graph;
  int site_dim = 0;
  std::vector<int> target_indices;  // 0-based indices into the local basis
  std::vector<ModelTerm> terms;
  std::map<std::string, double> couplings;

  SpacePtr make_space() const;
  TargetSubspace make_target() const;
  double coupling_value(const std::string& name) const;
  ManyBodyOperator assemble(SpacePtr space) const;
  /// Local terms grouped by their support region (couplings applied).
  std::vector<std::pair<ManyBodyOperator, std::set<int>>> assembled_terms(SpacePtr space) const;
  /// Throws ValidationError on invariant violations (per-support sums must
  /// be Hermitian, site indices valid, graph connected).
  void validate() const;
};

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg);
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Line-oriented model config (grammar documented in the README).
ModelSpec load_model(const std::string& config_text);
std::string to_config_text(const ModelSpec& spec);

struct XYModel {
  SpacePtr space;
  ManyBodyOperator hamiltonian;
  ModelSpec spec;
  double J, h, D;
};

/// Spin-1 XY chain: J sum(Sx Sx + Sy Sy) + sum(h Sz + D Sz^2). L even.
XYModel build_xy(int L, double J, double h, double D, bool periodic = true);

/// U = exp[-i pi sum_x x |+><+|_x] with x = 1..L; diagonal, unitary.
ManyBodyOperator gauge_unitary(SpacePtr space);

/// Explicit local terms of the gauged XY Hamiltonian: per edge (x,x+1) the
/// pairs (h1, P1) and (h2, P2), plus the on-site Zeeman/anisotropy list.
struct SmBondTerm {
  std::pair<int, int> edge;  // 0-based (x, x+1 mod L)
  Matrix h1, p1, h2, p2;     // 9x9 on the bond
};
struct XySmTerms {
  std::vector<SmBondTerm> bonds;
  std::vector<Matrix> onsite;  // 3x3 per site
};
XySmTerms xy_sm_terms(int L, double J, double h, double D);

struct DMModel {
  SpacePtr space;
  ManyBodyOperator hamiltonian;
  ModelSpec spec;
};

/// Qubit chain with sum_x (sz_x sx_{x+1} - sx_x sz_{x+1}).
DMModel build_dm_chain(int N, bool periodic = true);

}  // namespace qscar
