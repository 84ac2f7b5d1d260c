#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "qscar/hilbert.hpp"

namespace qscar {

using Rational = boost::rational<long long>;

/// Permutation of {0..N-1} in one-line notation, images[i] = sigma(i).
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);
  static Permutation transposition(int n, int a, int b);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_.at(i); }
  const std::vector<int>& images() const { return images_; }

  /// (this o other)(x) = this(other(x)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;
  int sign() const;
  bool is_identity() const;

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation& o) const { return images_ <=> o.images_; }

 private:
  std::vector<int> images_;
};

/// All permutations of degree n in lexicographic order.
std::vector<Permutation> all_permutations(int n);

/// Finitely supported rational-coefficient element of C[S_N]. Products use
/// the composition convention sigma*tau = sigma o tau.
class GroupAlgebraElement {
 public:
  explicit GroupAlgebraElement(int degree);
  static GroupAlgebraElement unit(int degree);
  static GroupAlgebraElement of(const Permutation& p, const Rational& c = Rational(1));

  int degree() const { return degree_; }
  size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Permutation, Rational>& terms() const { return terms_; }
  Rational coefficient(const Permutation& p) const;
  void add_term(const Permutation& p, const Rational& c);

  GroupAlgebraElement& operator+=(const GroupAlgebraElement& o);
  GroupAlgebraElement& operator-=(const GroupAlgebraElement& o);
  GroupAlgebraElement& operator*=(const Rational& c);
  bool operator==(const GroupAlgebraElement&) const = default;

 private:
  int degree_;
  std::map<Permutation, Rational> terms_;
};

GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement& b);
GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement& b);
GroupAlgebraElement operator*(const Rational& c, GroupAlgebraElement a);
GroupAlgebraElement ga_multiply(const GroupAlgebraElement& a, const GroupAlgebraElement& b);

/// Serialization: one line per term, "coeff : one-line-permutation".
std::string to_string(const GroupAlgebraElement& a);

struct YoungDiagram {
  std::vector<int> parts;  // weakly decreasing, positive, summing to N

  explicit YoungDiagram(std::vector<int> parts);
  int size() const;
  int num_rows() const { return static_cast<int>(parts.size()); }
  YoungDiagram conjugate() const;
  bool operator==(const YoungDiagram&) const = default;
};

/// Partitions of N, reverse-lexicographic: (N) first, (1,...,1) last.
std::vector<YoungDiagram> partitions_of(int n);

/// Standard Young tableau; entries stored 0-based, serialized 1-based.
struct YoungTableau {
  YoungDiagram diagram;
  std::vector<std::vector<int>> rows;

  YoungTableau(YoungDiagram d, std::vector<std::vector<int>> rows);
  bool is_standard() const;
  std::vector<int> row_word() const;
  /// (row, col) of a 0-based entry.
  std::pair<int, int> position_of(int entry) const;
  bool operator==(const YoungTableau&) const = default;
};

std::string to_string(const YoungTableau& t);

/// All standard tableaux of a diagram, lexicographically ordered by row word.
std::vector<YoungTableau> standard_tableaux(const YoungDiagram& diagram);

/// Row-preserving subgroup P_T / column-preserving subgroup Q_T, enumerated
/// deterministically.
std::vector<Permutation> row_group(const YoungTableau& t);
std::vector<Permutation> col_group(const YoungTableau& t);

/// a_T = sum of P_T; b_T = signed sum of Q_T; c_T = a_T b_T.
GroupAlgebraElement row_symmetrizer(const YoungTableau& t);
GroupAlgebraElement col_antisymmetrizer(const YoungTableau& t);
GroupAlgebraElement young_symmetrizer(const YoungTableau& t);

/// Irrep dimension via the hook-length formula.
long dim_irrep(const YoungDiagram& diagram);

enum class Side { left, right };

/// Index map of the left permutation action: sigma_hat e_i = e_{map[i]}.
std::vector<long> basis_permutation(const Permutation& p, const HilbertSpace& space);

/// Linear extension of the left action sigma_hat (Side::left) or of the
/// right action sigma_hat^R = (sigma^{-1})_hat (Side::right). The right
/// action is an algebra homomorphism, the left action an anti-homomorphism.
ManyBodyOperator represent(const Permutation& p, SpacePtr space, Side side);
ManyBodyOperator represent(const GroupAlgebraElement& a, SpacePtr space, Side side);

/// Exact resolution of the identity along the left ideals C[S_N]c_T:
/// 1 = sum_T u_T with u_T = z_T c_T, unique. Supported for N <= 5.
struct YoungResolutionTerm {
  YoungTableau tableau;
  GroupAlgebraElement z;  // left factor
  GroupAlgebraElement u;  // z * c_T
};
std::vector<YoungResolutionTerm> young_resolution(int n);

/// Multiplicity of the trivial irrep (N+M) in the induced representation
/// V_lambda o V_mu of S_{N+M}, computed from explicit matrices on the coset
/// space as the rank of the group-averaged projector. Requires N+M <= 7.
long trivial_multiplicity_outer(const YoungDiagram& lambda, const YoungDiagram& mu);

/// Young's orthogonal representation of S_N for one shape; used to build
/// induced representations from explicit matrices.
class YoungOrthogonalRep {
 public:
  explicit YoungOrthogonalRep(const YoungDiagram& diagram);
  int dim() const { return static_cast<int>(basis_.size()); }
  RealMatrix matrix(const Permutation& p) const;

 private:
  std::vector<YoungTableau> basis_;
  std::vector<RealMatrix> adjacent_;  // matrices for s_k = t_{k,k+1}
};

}  // namespace qscar
