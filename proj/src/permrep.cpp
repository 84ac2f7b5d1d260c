#include "qscar/permrep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qscar {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v])
      throw std::invalid_argument("Permutation: not a bijection");
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::transposition(int n, int a, int b) {
  auto p = identity(n);
  std::swap(p.images_[a], p.images_[b]);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  if (degree() != other.degree())
    throw std::invalid_argument("Permutation::compose: degree mismatch");
  std::vector<int> img(images_.size());
  for (size_t i = 0; i < img.size(); ++i) img[i] = images_[other.images_[i]];
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> img(images_.size());
  for (size_t i = 0; i < img.size(); ++i) img[images_[i]] = static_cast<int>(i);
  return Permutation(std::move(img));
}

int Permutation::sign() const {
  std::vector<char> seen(images_.size(), 0);
  int sgn = 1;
  for (size_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    size_t j = i, len = 0;
    while (!seen[j]) {
      seen[j] = 1;
      j = images_[j];
      ++len;
    }
    if (len % 2 == 0) sgn = -sgn;
  }
  return sgn;
}

bool Permutation::is_identity() const {
  for (size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

GroupAlgebraElement::GroupAlgebraElement(int degree) : degree_(degree) {
  if (degree <= 0) throw std::invalid_argument("GroupAlgebraElement: degree must be positive");
}

GroupAlgebraElement GroupAlgebraElement::unit(int degree) {
  return of(Permutation::identity(degree));
}

GroupAlgebraElement GroupAlgebraElement::of(const Permutation& p, const Rational& c) {
  GroupAlgebraElement a(p.degree());
  a.add_term(p, c);
  return a;
}

Rational GroupAlgebraElement::coefficient(const Permutation& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Rational(0) : it->second;
}

void GroupAlgebraElement::add_term(const Permutation& p, const Rational& c) {
  if (p.degree() != degree_)
    throw std::invalid_argument("GroupAlgebraElement: degree mismatch");
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    if (c != Rational(0)) terms_.emplace(p, c);
  } else {
    it->second += c;
    if (it->second == Rational(0)) terms_.erase(it);
  }
}

GroupAlgebraElement& GroupAlgebraElement::operator+=(const GroupAlgebraElement& o) {
  if (degree_ != o.degree_) throw std::invalid_argument("group algebra: degree mismatch");
  for (const auto& [p, c] : o.terms_) add_term(p, c);
  return *this;
}

GroupAlgebraElement& GroupAlgebraElement::operator-=(const GroupAlgebraElement& o) {
  if (degree_ != o.degree_) throw std::invalid_argument("group algebra: degree mismatch");
  for (const auto& [p, c] : o.terms_) add_term(p, -c);
  return *this;
}

GroupAlgebraElement& GroupAlgebraElement::operator*=(const Rational& c) {
  if (c == Rational(0)) {
    terms_.clear();
  } else {
    for (auto& [p, v] : terms_) v *= c;
  }
  return *this;
}

GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement& b) { return a += b; }
GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement& b) { return a -= b; }
GroupAlgebraElement operator*(const Rational& c, GroupAlgebraElement a) { return a *= c; }

GroupAlgebraElement ga_multiply(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("ga_multiply: degree mismatch");
  GroupAlgebraElement out(a.degree());
  for (const auto& [s, ca] : a.terms())
    for (const auto& [t, cb] : b.terms()) out.add_term(s.compose(t), ca * cb);
  return out;
}

std::string to_string(const GroupAlgebraElement& a) {
  std::ostringstream os;
  for (const auto& [p, c] : a.terms()) {
    os << c.numerator();
    if (c.denominator() != 1) os << "/" << c.denominator();
    os << " :";
    for (int v : p.images()) os << " " << v;
    os << "\n";
  }
  return os.str();
}

YoungDiagram::YoungDiagram(std::vector<int> p) : parts(std::move(p)) {
  if (parts.empty()) throw std::invalid_argument("YoungDiagram: empty partition");
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 1) throw std::invalid_argument("YoungDiagram: parts must be positive");
    if (i > 0 && parts[i] > parts[i - 1])
      throw std::invalid_argument("YoungDiagram: parts must be weakly decreasing");
  }
}

int YoungDiagram::size() const {
  return std::accumulate(parts.begin(), parts.end(), 0);
}

YoungDiagram YoungDiagram::conjugate() const {
  std::vector<int> conj(parts[0], 0);
  for (int j = 0; j < parts[0]; ++j)
    conj[j] = static_cast<int>(std::count_if(parts.begin(), parts.end(),
                                             [&](int r) { return r > j; }));
  return YoungDiagram(std::move(conj));
}

namespace {

void partitions_rec(int n, int mx, std::vector<int>& acc,
                    std::vector<YoungDiagram>& out) {
  if (n == 0) {
    out.push_back(YoungDiagram(acc));
    return;
  }
  for (int k = std::min(n, mx); k >= 1; --k) {
    acc.push_back(k);
    partitions_rec(n - k, k, acc, out);
    acc.pop_back();
  }
}

}  // namespace

std::vector<YoungDiagram> partitions_of(int n) {
  std::vector<YoungDiagram> out;
  std::vector<int> acc;
  partitions_rec(n, n, acc, out);
  return out;
}

YoungTableau::YoungTableau(YoungDiagram d, std::vector<std::vector<int>> r)
    : diagram(std::move(d)), rows(std::move(r)) {
  if (rows.size() != diagram.parts.size())
    throw std::invalid_argument("YoungTableau: row count mismatch");
  std::vector<char> seen(diagram.size(), 0);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != diagram.parts[i])
      throw std::invalid_argument("YoungTableau: row length mismatch");
    for (int e : rows[i]) {
      if (e < 0 || e >= diagram.size() || seen[e])
        throw std::invalid_argument("YoungTableau: entries must number boxes once");
      seen[e] = 1;
    }
  }
}

bool YoungTableau::is_standard() const {
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) {
      if (j + 1 < rows[i].size() && rows[i][j] >= rows[i][j + 1]) return false;
      if (i + 1 < rows.size() && j < rows[i + 1].size() && rows[i][j] >= rows[i + 1][j])
        return false;
    }
  return true;
}

std::vector<int> YoungTableau::row_word() const {
  std::vector<int> w;
  for (const auto& r : rows) w.insert(w.end(), r.begin(), r.end());
  return w;
}

std::pair<int, int> YoungTableau::position_of(int entry) const {
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j] == entry) return {static_cast<int>(i), static_cast<int>(j)};
  throw std::invalid_argument("YoungTableau::position_of: entry not present");
}

std::string to_string(const YoungTableau& t) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < t.rows.size(); ++i) {
    if (i) os << ",";
    os << "[";
    for (size_t j = 0; j < t.rows[i].size(); ++j) {
      if (j) os << ",";
      os << t.rows[i][j] + 1;
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

void tableaux_rec(const YoungDiagram& d, int next, std::vector<std::vector<int>>& rows,
                  std::vector<int>& filled, std::vector<YoungTableau>& out) {
  if (next == d.size()) {
    out.push_back(YoungTableau(d, rows));
    return;
  }
  for (size_t i = 0; i < d.parts.size(); ++i) {
    int j = filled[i];
    if (j >= d.parts[i]) continue;
    if (i > 0 && filled[i - 1] <= j) continue;
    rows[i][j] = next;
    ++filled[i];
    tableaux_rec(d, next + 1, rows, filled, out);
    --filled[i];
  }
}

}  // namespace

std::vector<YoungTableau> standard_tableaux(const YoungDiagram& diagram) {
  std::vector<std::vector<int>> rows;
  for (int r : diagram.parts) rows.push_back(std::vector<int>(r, -1));
  std::vector<int> filled(diagram.parts.size(), 0);
  std::vector<YoungTableau> out;
  tableaux_rec(diagram, 0, rows, filled, out);
  std::sort(out.begin(), out.end(),
            [](const YoungTableau& a, const YoungTableau& b) { return a.row_word() < b.row_word(); });
  return out;
}

namespace {

/// All permutations of {0..n-1} that permute within each block, in a fixed
/// deterministic order.
std::vector<Permutation> block_permutations(int n, const std::vector<std::vector<int>>& blocks) {
  std::vector<std::vector<std::vector<int>>> arrangements;
  for (const auto& b : blocks) {
    std::vector<int> sorted = b;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<int>> arr;
    do {
      arr.push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    arrangements.push_back(std::move(arr));
  }
  std::vector<Permutation> out;
  std::vector<size_t> idx(blocks.size(), 0);
  while (true) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (size_t k = 0; k < blocks.size(); ++k) {
      std::vector<int> sorted = blocks[k];
      std::sort(sorted.begin(), sorted.end());
      const auto& target = arrangements[k][idx[k]];
      for (size_t j = 0; j < sorted.size(); ++j) img[sorted[j]] = target[j];
    }
    out.push_back(Permutation(std::move(img)));
    size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < arrangements[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  return out;
}

}  // namespace

std::vector<Permutation> row_group(const YoungTableau& t) {
  if (!t.is_standard()) throw std::invalid_argument("row_group: tableau is not standard");
  return block_permutations(t.diagram.size(), t.rows);
}

std::vector<Permutation> col_group(const YoungTableau& t) {
  if (!t.is_standard()) throw std::invalid_argument("col_group: tableau is not standard");
  std::vector<std::vector<int>> cols;
  for (int j = 0; j < t.diagram.parts[0]; ++j) {
    std::vector<int> col;
    for (const auto& row : t.rows)
      if (j < static_cast<int>(row.size())) col.push_back(row[j]);
    cols.push_back(std::move(col));
  }
  return block_permutations(t.diagram.size(), cols);
}

GroupAlgebraElement row_symmetrizer(const YoungTableau& t) {
  GroupAlgebraElement a(t.diagram.size());
  for (const auto& p : row_group(t)) a.add_term(p, Rational(1));
  return a;
}

GroupAlgebraElement col_antisymmetrizer(const YoungTableau& t) {
  GroupAlgebraElement b(t.diagram.size());
  for (const auto& q : col_group(t)) b.add_term(q, Rational(q.sign()));
  return b;
}

GroupAlgebraElement young_symmetrizer(const YoungTableau& t) {
  return ga_multiply(row_symmetrizer(t), col_antisymmetrizer(t));
}

long dim_irrep(const YoungDiagram& diagram) {
  const int n = diagram.size();
  YoungDiagram conj = diagram.conjugate();
  long long num = 1;
  for (int k = 2; k <= n; ++k) num *= k;
  long long den = 1;
  for (size_t i = 0; i < diagram.parts.size(); ++i)
    for (int j = 0; j < diagram.parts[i]; ++j)
      den *= (diagram.parts[i] - j) + (conj.parts[j] - static_cast<int>(i)) - 1;
  return static_cast<long>(num / den);
}

std::vector<long> basis_permutation(const Permutation& p, const HilbertSpace& space) {
  if (!space.homogeneous())
    throw std::invalid_argument("basis_permutation: heterogeneous site dimensions");
  if (p.degree() != space.num_sites())
    throw std::invalid_argument("basis_permutation: degree != number of sites");
  const int n = space.num_sites();
  std::vector<long> map(space.dim());
  std::vector<int> digits(n), out(n);
  for (long i = 0; i < space.dim(); ++i) {
    space.decode(i, digits);
    for (int x = 0; x < n; ++x) out[x] = digits[p(x)];
    map[i] = space.encode(out);
  }
  return map;
}

ManyBodyOperator represent(const Permutation& p, SpacePtr space, Side side) {
  const Permutation q = (side == Side::left) ? p : p.inverse();
  auto map = basis_permutation(q, *space);
  Matrix m = Matrix::Zero(space->dim(), space->dim());
  for (long i = 0; i < space->dim(); ++i) m(map[i], i) = 1.0;
  std::set<int> support;
  for (int x = 0; x < space->num_sites(); ++x)
    if (q(x) != x) support.insert(x);
  return {std::move(space), std::move(m), support};
}

ManyBodyOperator represent(const GroupAlgebraElement& a, SpacePtr space, Side side) {
  if (!space->homogeneous())
    throw std::invalid_argument("represent: heterogeneous site dimensions");
  Matrix m = Matrix::Zero(space->dim(), space->dim());
  std::set<int> support;
  for (const auto& [p, c] : a.terms()) {
    const Permutation q = (side == Side::left) ? p : p.inverse();
    auto map = basis_permutation(q, *space);
    double cv = boost::rational_cast<double>(c);
    for (long i = 0; i < space->dim(); ++i) m(map[i], i) += cv;
    for (int x = 0; x < space->num_sites(); ++x)
      if (q(x) != x) support.insert(x);
  }
  return {std::move(space), std::move(m), support};
}

// ---------------------------------------------------------------------------
// Exact resolution 1 = sum_T u_T along the left ideals C[S_N]c_T.
// ---------------------------------------------------------------------------

namespace {

RealMatrix kron_real(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<YoungTableau> all_standard_tableaux(int n) {
  std::vector<YoungTableau> out;
  for (const auto& shape : partitions_of(n))
    for (auto& t : standard_tableaux(shape)) out.push_back(std::move(t));
  return out;
}

using RationalRow = std::vector<Rational>;

RationalRow vector_of(const GroupAlgebraElement& a,
                      const std::map<Permutation, int>& index, int dim) {
  RationalRow v(dim, Rational(0));
  for (const auto& [p, c] : a.terms()) v[index.at(p)] = c;
  return v;
}

}  // namespace

std::vector<YoungResolutionTerm> young_resolution(int n) {
  if (n < 1 || n > 5)
    throw std::invalid_argument("young_resolution: supported for 1 <= N <= 5");
  if (n == 1) {
    YoungTableau t(YoungDiagram({1}), {{0}});
    return {{t, GroupAlgebraElement::unit(1), GroupAlgebraElement::unit(1)}};
  }

  const auto perms = all_permutations(n);
  std::map<Permutation, int> index;
  for (size_t k = 0; k < perms.size(); ++k) index.emplace(perms[k], static_cast<int>(k));
  const int dim = static_cast<int>(perms.size());

  const auto tableaux = all_standard_tableaux(n);
  std::vector<GroupAlgebraElement> cs;
  for (const auto& t : tableaux) cs.push_back(young_symmetrizer(t));

  // Basis of each ideal C[S_N]c_T by a rank-growing scan over sigma*c_T.
  std::vector<std::pair<int, RationalRow>> reduced;  // (pivot, normalized row)
  auto try_insert = [&](RationalRow v) -> bool {
    for (const auto& [piv, r] : reduced) {
      if (v[piv] != Rational(0)) {
        Rational f = v[piv];
        for (int k = 0; k < dim; ++k) v[k] -= f * r[k];
      }
    }
    for (int k = 0; k < dim; ++k) {
      if (v[k] != Rational(0)) {
        Rational f = v[k];
        for (int j = 0; j < dim; ++j) v[j] /= f;
        reduced.emplace_back(k, std::move(v));
        return true;
      }
    }
    return false;
  };

  std::vector<RationalRow> columns;
  std::vector<std::pair<int, Permutation>> column_info;  // (tableau index, sigma)
  for (size_t ti = 0; ti < tableaux.size(); ++ti) {
    long want = dim_irrep(tableaux[ti].diagram);
    long got = 0;
    for (const auto& p : perms) {
      auto elem = ga_multiply(GroupAlgebraElement::of(p), cs[ti]);
      auto v = vector_of(elem, index, dim);
      if (try_insert(v)) {
        columns.push_back(vector_of(elem, index, dim));
        column_info.emplace_back(static_cast<int>(ti), p);
        if (++got == want) break;
      }
    }
    if (got != want) throw std::logic_error("young_resolution: ideal basis incomplete");
  }
  if (static_cast<int>(columns.size()) != dim)
    throw std::logic_error("young_resolution: ideal bases do not span C[S_N]");

  // Solve M x = e_identity exactly (columns of M are the ideal basis vectors).
  std::vector<RationalRow> m(dim, RationalRow(dim, Rational(0)));
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) m[r][c] = columns[c][r];
  RationalRow rhs(dim, Rational(0));
  rhs[index.at(Permutation::identity(n))] = Rational(1);
  for (int c = 0; c < dim; ++c) {
    int pivot = -1;
    for (int r = c; r < dim; ++r)
      if (m[r][c] != Rational(0)) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::logic_error("young_resolution: singular system");
    std::swap(m[c], m[pivot]);
    std::swap(rhs[c], rhs[pivot]);
    Rational inv = Rational(1) / m[c][c];
    for (int k = 0; k < dim; ++k) m[c][k] *= inv;
    rhs[c] *= inv;
    for (int r = 0; r < dim; ++r) {
      if (r == c || m[r][c] == Rational(0)) continue;
      Rational f = m[r][c];
      for (int k = 0; k < dim; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }

  std::vector<YoungResolutionTerm> out;
  for (size_t ti = 0; ti < tableaux.size(); ++ti) {
    GroupAlgebraElement z(n);
    for (int k = 0; k < dim; ++k)
      if (rhs[k] != Rational(0) && column_info[k].first == static_cast<int>(ti))
        z.add_term(column_info[k].second, rhs[k]);
    out.push_back({tableaux[ti], z, ga_multiply(z, cs[ti])});
  }

  GroupAlgebraElement total(n);
  for (const auto& term : out) total += term.u;
  if (!(total == GroupAlgebraElement::unit(n)))
    throw std::logic_error("young_resolution: resolution does not sum to 1");
  return out;
}

// ---------------------------------------------------------------------------
// Young's orthogonal representation and induced-representation multiplicity.
// ---------------------------------------------------------------------------

YoungOrthogonalRep::YoungOrthogonalRep(const YoungDiagram& diagram)
    : basis_(standard_tableaux(diagram)) {
  const int n = diagram.size();
  const int d = dim();
  for (int k = 0; k + 1 < n; ++k) {
    RealMatrix m = RealMatrix::Zero(d, d);
    for (int t = 0; t < d; ++t) {
      auto [rk, ck] = basis_[t].position_of(k);
      auto [rk1, ck1] = basis_[t].position_of(k + 1);
      double dist = (ck1 - rk1) - (ck - rk);  // axial distance, never 0
      m(t, t) = 1.0 / dist;
      if (std::abs(dist) >= 2) {
        auto rows = basis_[t].rows;
        rows[rk][ck] = k + 1;
        rows[rk1][ck1] = k;
        YoungTableau swapped(diagram, rows);
        auto it = std::find(basis_.begin(), basis_.end(), swapped);
        int t2 = static_cast<int>(it - basis_.begin());
        m(t2, t) = std::sqrt(1.0 - 1.0 / (dist * dist));
      }
    }
    adjacent_.push_back(std::move(m));
  }
}

RealMatrix YoungOrthogonalRep::matrix(const Permutation& p) const {
  const int d = dim();
  RealMatrix out = RealMatrix::Identity(d, d);
  // Reduce p to the identity by right-multiplying with adjacent
  // transpositions: id = p o s_{j1} o ... o s_{jk}, so p = s_{jk} o ... o s_{j1}.
  std::vector<int> w = p.images();
  std::vector<int> word;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t j = 0; j + 1 < w.size(); ++j) {
      if (w[j] > w[j + 1]) {
        std::swap(w[j], w[j + 1]);
        word.push_back(static_cast<int>(j));
        changed = true;
      }
    }
  }
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = out * adjacent_[*it];
  return out;
}

long trivial_multiplicity_outer(const YoungDiagram& lambda, const YoungDiagram& mu) {
  const int n = lambda.size(), m = mu.size(), nm = n + m;
  if (nm > 7) throw std::invalid_argument("trivial_multiplicity_outer: N+M <= 7 required");

  YoungOrthogonalRep repL(lambda), repM(mu);
  const int dw = repL.dim() * repM.dim();

  // Coset representatives of S_{N+M}/(S_N x S_M): lexicographically ordered
  // N-subsets S; g_S maps i -> S[i] for i < N and N+j -> complement[j].
  std::vector<std::vector<int>> subsets;
  std::vector<int> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    subsets.push_back(pick);
    int i = n - 1;
    while (i >= 0 && pick[i] == nm - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::map<std::vector<int>, int> subset_index;
  std::vector<Permutation> reps;
  for (size_t k = 0; k < subsets.size(); ++k) {
    subset_index.emplace(subsets[k], static_cast<int>(k));
    std::vector<int> img(nm);
    std::vector<char> used(nm, 0);
    for (int i = 0; i < n; ++i) {
      img[i] = subsets[k][i];
      used[subsets[k][i]] = 1;
    }
    int j = n;
    for (int v = 0; v < nm; ++v)
      if (!used[v]) img[j++] = v;
    reps.push_back(Permutation(std::move(img)));
  }

  const int dims = static_cast<int>(subsets.size()) * dw;
  RealMatrix avg = RealMatrix::Zero(dims, dims);
  long count = 0;
  for (const auto& g : all_permutations(nm)) {
    for (size_t k = 0; k < subsets.size(); ++k) {
      std::vector<int> image(n);
      for (int i = 0; i < n; ++i) image[i] = g(subsets[k][i]);
      std::sort(image.begin(), image.end());
      int k2 = subset_index.at(image);
      Permutation h = reps[k2].inverse().compose(g).compose(reps[k]);
      std::vector<int> hn(n), hm(m);
      for (int i = 0; i < n; ++i) hn[i] = h(i);
      for (int j = 0; j < m; ++j) hm[j] = h(n + j) - n;
      RealMatrix w = kron_real(repL.matrix(Permutation(hn)), repM.matrix(Permutation(hm)));
      avg.block(k2 * dw, static_cast<int>(k) * dw, dw, dw) += w;
    }
    ++count;
  }
  avg /= static_cast<double>(count);

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (avg + avg.transpose()));
  long rank = 0;
  for (double ev : solver.eigenvalues())
    if (ev > 0.5) ++rank;
  return rank;
}

}  // namespace qscar
