#include "qscar/hilbert.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qscar {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::pair<int, int> ordered_edge(int a, int b) {
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace

LatticeGraph::LatticeGraph(int num_sites, std::set<std::pair<int, int>> edges)
    : num_sites_(num_sites) {
  if (num_sites <= 0) throw std::invalid_argument("LatticeGraph: num_sites must be positive");
  for (auto [a, b] : edges) {
    if (a == b) throw std::invalid_argument("LatticeGraph: self-loop");
    if (a < 0 || b < 0 || a >= num_sites || b >= num_sites)
      throw std::invalid_argument("LatticeGraph: edge site out of range");
    edges_.insert(ordered_edge(a, b));
  }
  // connectivity
  std::vector<char> seen(num_sites_, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int y : neighbors(x)) {
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        queue.push_back(y);
      }
    }
  }
  if (reached != num_sites_) throw std::invalid_argument("LatticeGraph: graph is disconnected");
}

LatticeGraph LatticeGraph::chain(int num_sites, bool periodic) {
  std::set<std::pair<int, int>> edges;
  for (int x = 0; x + 1 < num_sites; ++x) edges.insert({x, x + 1});
  if (periodic && num_sites > 2) edges.insert({0, num_sites - 1});
  if (periodic && num_sites == 2) edges.insert({0, 1});
  return LatticeGraph(num_sites, std::move(edges));
}

bool LatticeGraph::has_edge(int a, int b) const {
  return edges_.count(ordered_edge(a, b)) > 0;
}

std::vector<int> LatticeGraph::neighbors(int x) const {
  std::vector<int> out;
  for (auto [a, b] : edges_) {
    if (a == x) out.push_back(b);
    if (b == x) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LatticeGraph::shortest_path(int a, int b) const {
  if (a < 0 || b < 0 || a >= num_sites_ || b >= num_sites_)
    throw std::invalid_argument("shortest_path: site out of range");
  std::vector<int> parent(num_sites_, -1);
  std::deque<int> queue{a};
  std::vector<char> seen(num_sites_, 0);
  seen[a] = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == b) break;
    for (int y : neighbors(x)) {
      if (!seen[y]) {
        seen[y] = 1;
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> path{b};
  while (path.back() != a) {
    int p = parent[path.back()];
    if (p < 0) throw std::logic_error("shortest_path: no path found");
    path.push_back(p);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

HilbertSpace::HilbertSpace(std::vector<int> site_dims, LatticeGraph graph)
    : site_dims_(std::move(site_dims)), graph_(std::move(graph)) {
  if (site_dims_.empty()) throw std::invalid_argument("HilbertSpace: no sites");
  if (graph_.num_sites() != static_cast<int>(site_dims_.size()))
    throw std::invalid_argument("HilbertSpace: graph vertex count != number of sites");
  dim_ = 1;
  for (int d : site_dims_) {
    if (d < 2) throw std::invalid_argument("HilbertSpace: site dimension must be >= 2");
    dim_ *= d;
  }
  strides_.assign(site_dims_.size(), 1);
  for (int x = static_cast<int>(site_dims_.size()) - 2; x >= 0; --x)
    strides_[x] = strides_[x + 1] * site_dims_[x + 1];
}

bool HilbertSpace::homogeneous() const {
  return std::all_of(site_dims_.begin(), site_dims_.end(),
                     [&](int d) { return d == site_dims_[0]; });
}

void HilbertSpace::decode(long index, std::span<int> digits) const {
  for (int x = 0; x < num_sites(); ++x)
    digits[x] = static_cast<int>((index / strides_[x]) % site_dims_[x]);
}

long HilbertSpace::encode(std::span<const int> digits) const {
  long index = 0;
  for (int x = 0; x < num_sites(); ++x) index += digits[x] * strides_[x];
  return index;
}

bool HilbertSpace::same_as(const HilbertSpace& other) const {
  return this == &other ||
         (site_dims_ == other.site_dims_ && graph_.edges() == other.graph_.edges());
}

SpacePtr make_space(std::vector<int> site_dims, LatticeGraph graph) {
  return std::make_shared<const HilbertSpace>(std::move(site_dims), std::move(graph));
}

SpacePtr make_chain_space(int num_sites, int local_dim, bool periodic) {
  return make_space(std::vector<int>(num_sites, local_dim),
                    LatticeGraph::chain(num_sites, periodic));
}

namespace {

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!a || !b || !a->same_as(*b))
    throw std::invalid_argument(std::string(what) + ": operands live on different spaces");
}

std::set<int> set_union(const std::set<int>& a, const std::set<int>& b) {
  std::set<int> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

ManyBodyOperator ManyBodyOperator::adjoint() const {
  return {space, matrix.adjoint(), support};
}

double ManyBodyOperator::max_abs() const {
  return matrix.size() ? matrix.cwiseAbs().maxCoeff() : 0.0;
}

bool ManyBodyOperator::is_hermitian(double tol) const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ManyBodyOperator& ManyBodyOperator::operator+=(const ManyBodyOperator& o) {
  require_same_space(space, o.space, "operator+");
  matrix += o.matrix;
  support = set_union(support, o.support);
  return *this;
}

ManyBodyOperator& ManyBodyOperator::operator-=(const ManyBodyOperator& o) {
  require_same_space(space, o.space, "operator-");
  matrix -= o.matrix;
  support = set_union(support, o.support);
  return *this;
}

ManyBodyOperator operator+(ManyBodyOperator a, const ManyBodyOperator& b) { return a += b; }
ManyBodyOperator operator-(ManyBodyOperator a, const ManyBodyOperator& b) { return a -= b; }

ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b) {
  require_same_space(a.space, b.space, "operator*");
  return {a.space, a.matrix * b.matrix, set_union(a.support, b.support)};
}

ManyBodyOperator operator*(Complex c, ManyBodyOperator a) {
  a.matrix *= c;
  return a;
}

StateVector StateVector::normalized() const {
  double n = norm();
  if (n <= 0.0) throw std::invalid_argument("StateVector: cannot normalize zero vector");
  return {space, amplitudes / n};
}

StateVector operator*(const ManyBodyOperator& op, const StateVector& v) {
  require_same_space(op.space, v.space, "operator*state");
  return {v.space, op.matrix * v.amplitudes};
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_space(a.space, b.space, "inner");
  return a.amplitudes.dot(b.amplitudes);
}

ManyBodyOperator identity_operator(SpacePtr space) {
  long dim = space->dim();
  return {std::move(space), Matrix::Identity(dim, dim), {}};
}

ManyBodyOperator embed(const Matrix& local_op, const std::vector<int>& sites,
                       SpacePtr space) {
  const int n = space->num_sites();
  std::set<int> distinct(sites.begin(), sites.end());
  if (distinct.size() != sites.size())
    throw std::invalid_argument("embed: duplicate site");
  long local_dim = 1;
  for (int x : sites) {
    if (x < 0 || x >= n) throw std::invalid_argument("embed: site out of range");
    local_dim *= space->site_dim(x);
  }
  if (local_op.rows() != local_dim || local_op.cols() != local_dim)
    throw std::invalid_argument("embed: local operator dimension mismatch");

  const long dim = space->dim();
  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> digits(n), new_digits(n), local_digits(sites.size());
  for (long col = 0; col < dim; ++col) {
    space->decode(col, digits);
    long lc = 0;
    for (size_t k = 0; k < sites.size(); ++k) lc = lc * space->site_dim(sites[k]) + digits[sites[k]];
    for (long lr = 0; lr < local_dim; ++lr) {
      Complex v = local_op(lr, lc);
      if (v == Complex(0)) continue;
      long rest = lr;
      for (size_t k = sites.size(); k-- > 0;) {
        local_digits[k] = static_cast<int>(rest % space->site_dim(sites[k]));
        rest /= space->site_dim(sites[k]);
      }
      new_digits = digits;
      for (size_t k = 0; k < sites.size(); ++k) new_digits[sites[k]] = local_digits[k];
      out(space->encode(new_digits), col) += v;
    }
  }
  return {std::move(space), std::move(out), distinct};
}

ManyBodyOperator swap_operator(int x, int y, SpacePtr space) {
  const int n = space->num_sites();
  if (x < 0 || y < 0 || x >= n || y >= n)
    throw std::invalid_argument("swap_operator: site out of range");
  if (space->site_dim(x) != space->site_dim(y))
    throw std::invalid_argument("swap_operator: unequal local dimensions");
  const long dim = space->dim();
  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> digits(n);
  for (long col = 0; col < dim; ++col) {
    space->decode(col, digits);
    std::swap(digits[x], digits[y]);
    out(space->encode(digits), col) = 1.0;
  }
  std::set<int> support;
  if (x != y) support = {x, y};
  return {std::move(space), std::move(out), support};
}

EighResult eigh(const ManyBodyOperator& op) {
  if (!op.is_hermitian(1e-10))
    throw std::invalid_argument("eigh: operator is not Hermitian within 1e-10");
  Matrix sym = 0.5 * (op.matrix + op.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix reduced_density_matrix(const StateVector& state, const std::set<int>& region) {
  const auto& space = *state.space;
  const int n = space.num_sites();
  for (int x : region)
    if (x < 0 || x >= n) throw std::invalid_argument("reduced_density_matrix: site out of range");
  long dr = 1, dc = 1;
  std::vector<int> rsites(region.begin(), region.end()), csites;
  for (int x = 0; x < n; ++x)
    if (!region.count(x)) csites.push_back(x);
  for (int x : rsites) dr *= space.site_dim(x);
  for (int x : csites) dc *= space.site_dim(x);

  Matrix m = Matrix::Zero(dr, dc);
  std::vector<int> digits(n);
  for (long i = 0; i < space.dim(); ++i) {
    Complex a = state.amplitudes[i];
    if (a == Complex(0)) continue;
    space.decode(i, digits);
    long r = 0, c = 0;
    for (int x : rsites) r = r * space.site_dim(x) + digits[x];
    for (int x : csites) c = c * space.site_dim(x) + digits[x];
    m(r, c) += a;
  }
  return m * m.adjoint();
}

double entanglement_entropy(const StateVector& state, const std::set<int>& region) {
  if (std::abs(state.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("entanglement_entropy: state is not normalized");
  if (region.empty() || static_cast<int>(region.size()) == state.space->num_sites())
    return 0.0;
  Matrix rho = reduced_density_matrix(state, region);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
  double s = 0.0;
  for (double p : solver.eigenvalues())
    if (p > 1e-15) s -= p * std::log(p);
  return s;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << " " << m.cols() << "\n";
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      os << format_double(m(r, c).real()) << " " << format_double(m(r, c).imag());
    }
    os << "\n";
  }
}

Matrix read_matrix(std::istream& is) {
  long rows = 0, cols = 0;
  if (!(is >> rows >> cols)) throw std::runtime_error("read_matrix: bad header");
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      double re = 0, im = 0;
      if (!(is >> re >> im)) throw std::runtime_error("read_matrix: truncated data");
      m(r, c) = Complex(re, im);
    }
  return m;
}

}  // namespace qscar
