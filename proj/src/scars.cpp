#include "qscar/scars.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qscar/permrep.hpp"

namespace qscar {

TargetSubspace::TargetSubspace(int parent_dim, Matrix basis)
    : parent_dim_(parent_dim), basis_(std::move(basis)) {
  if (basis_.rows() != parent_dim_ || basis_.cols() < 1 || basis_.cols() > parent_dim_)
    throw std::invalid_argument("TargetSubspace: bad basis shape");
  Matrix gram = basis_.adjoint() * basis_;
  if ((gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("TargetSubspace: basis is not orthonormal within 1e-12");
}

TargetSubspace TargetSubspace::full(int d) {
  return TargetSubspace(d, Matrix::Identity(d, d));
}

TargetSubspace TargetSubspace::from_indices(int d, const std::vector<int>& indices) {
  Matrix b = Matrix::Zero(d, static_cast<long>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= d)
      throw std::invalid_argument("TargetSubspace: basis index out of range");
    b(indices[k], static_cast<long>(k)) = 1.0;
  }
  return TargetSubspace(d, std::move(b));
}

Matrix TargetSubspace::cartan(int i) const {
  if (i < 0 || i >= num_cartans()) throw std::invalid_argument("cartan: index out of range");
  Matrix h = Matrix::Zero(dim(), dim());
  h(i, i) = 1.0;
  h(i + 1, i + 1) = -1.0;
  return h;
}

Matrix TargetSubspace::raising(int i) const {
  if (i < 0 || i >= num_cartans()) throw std::invalid_argument("raising: index out of range");
  Matrix e = Matrix::Zero(dim(), dim());
  e(i, i + 1) = 1.0;
  return e;
}

Matrix TargetSubspace::lowering(int i) const { return raising(i).adjoint(); }

Matrix TargetSubspace::lift(const Matrix& on_target) const {
  if (on_target.rows() != dim() || on_target.cols() != dim())
    throw std::invalid_argument("lift: operator must be d_s x d_s");
  return basis_ * on_target * basis_.adjoint();
}

std::vector<int> TargetSubspace::label_weight(int j) const {
  if (j < 0 || j >= dim()) throw std::invalid_argument("label_weight: label out of range");
  std::vector<int> w(num_cartans(), 0);
  for (int i = 0; i < num_cartans(); ++i) {
    if (j == i) w[i] = 1;
    if (j == i + 1) w[i] = -1;
  }
  return w;
}

Matrix TargetSubspace::complement_basis() const {
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix q = qr.householderQ() * Matrix::Identity(parent_dim_, parent_dim_);
  Matrix comp = q.rightCols(parent_dim_ - dim());
  return comp;
}

WeightConfig WeightConfig::parse(const std::string& text) {
  WeightConfig c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    int v = std::stoi(item, &pos);
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw std::invalid_argument("WeightConfig: bad token '" + item + "'");
    c.labels.push_back(v);
  }
  if (c.labels.empty()) throw std::invalid_argument("WeightConfig: empty");
  return c;
}

std::string WeightConfig::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) os << ",";
    os << labels[i];
  }
  return os.str();
}

std::vector<int> WeightConfig::total_weight(const TargetSubspace& target) const {
  std::vector<int> total(target.num_cartans(), 0);
  for (int l : labels) {
    auto w = target.label_weight(l);
    for (size_t i = 0; i < w.size(); ++i) total[i] += w[i];
  }
  return total;
}

std::vector<int> WeightConfig::label_counts(const TargetSubspace& target) const {
  std::vector<int> counts(target.dim(), 0);
  for (int l : labels) {
    if (l < 0 || l >= target.dim())
      throw std::invalid_argument("WeightConfig: label out of range");
    ++counts[l];
  }
  return counts;
}

namespace {

void require_target_fits(const TargetSubspace& target, const HilbertSpace& space) {
  for (int x = 0; x < space.num_sites(); ++x)
    if (space.site_dim(x) != target.parent_dim())
      throw std::invalid_argument("target parent dimension does not match site dimension");
}

}  // namespace

ManyBodyOperator site_projector(const TargetSubspace& target, SpacePtr space, int x) {
  require_target_fits(target, *space);
  Matrix p = target.basis() * target.basis().adjoint();
  return embed(p, {x}, std::move(space));
}

ManyBodyOperator region_projector(const TargetSubspace& target, SpacePtr space,
                                  const std::set<int>& region) {
  require_target_fits(target, *space);
  auto out = identity_operator(space);
  for (int x : region) out = out * site_projector(target, space, x);
  out.support = region;
  return out;
}

ManyBodyOperator collective_operator(const TargetSubspace& target, SpacePtr space,
                                     const Matrix& generator) {
  require_target_fits(target, *space);
  if (generator.rows() != target.dim() || generator.cols() != target.dim())
    throw std::invalid_argument("collective_operator: generator must be d_s x d_s");
  Matrix lifted = target.lift(generator);
  long dim = space->dim();
  ManyBodyOperator out{space, Matrix::Zero(dim, dim), {}};
  for (int x = 0; x < space->num_sites(); ++x) out += embed(lifted, {x}, space);
  for (int x = 0; x < space->num_sites(); ++x) out.support.insert(x);
  return out;
}

namespace {

/// Fix the global phase: lexicographically smallest product-basis amplitude
/// above threshold becomes real positive.
void fix_phase(Vector& amps) {
  double mx = amps.cwiseAbs().maxCoeff();
  for (long i = 0; i < amps.size(); ++i) {
    if (std::abs(amps[i]) > 1e-12 * mx) {
      Complex phase = amps[i] / std::abs(amps[i]);
      amps /= phase;
      return;
    }
  }
}

Vector product_of_target_vectors(const TargetSubspace& target, const HilbertSpace& space,
                                 const std::vector<int>& labels) {
  Vector v = Vector::Ones(1);
  for (int x = 0; x < space.num_sites(); ++x) {
    const Vector site = target.basis().col(labels[x]);
    Vector next(v.size() * site.size());
    for (long i = 0; i < v.size(); ++i)
      next.segment(i * site.size(), site.size()) = v[i] * site;
    v = std::move(next);
  }
  return v;
}

}  // namespace

StateVector weight_basis_state(const TargetSubspace& target, SpacePtr space,
                               const WeightConfig& config) {
  require_target_fits(target, *space);
  if (static_cast<int>(config.labels.size()) != space->num_sites())
    throw std::invalid_argument("weight_basis_state: config length != number of sites");
  config.label_counts(target);  // validates labels

  std::vector<int> arrangement = config.labels;
  std::sort(arrangement.begin(), arrangement.end());
  Vector amps = Vector::Zero(space->dim());
  do {
    amps += product_of_target_vectors(target, *space, arrangement);
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  amps /= amps.norm();
  fix_phase(amps);
  return {std::move(space), std::move(amps)};
}

StateVector lowered_state(const TargetSubspace& target, SpacePtr space,
                          const WeightConfig& config) {
  require_target_fits(target, *space);
  auto counts = config.label_counts(target);
  // p_i applications of the i-th simple-root collective lowering operator
  // move p_i sites from label i to label i+1; applying the F_1 powers first
  // keeps every intermediate state nonzero.
  std::vector<long> powers(target.num_cartans(), 0);
  for (int i = 0; i < target.num_cartans(); ++i)
    for (int j = i + 1; j < target.dim(); ++j) powers[i] += counts[j];

  WeightConfig highest;
  highest.labels.assign(space->num_sites(), 0);
  StateVector v = {space, product_of_target_vectors(target, *space, highest.labels)};
  for (int i = 0; i < target.num_cartans(); ++i) {
    if (powers[i] == 0) continue;
    auto f = collective_operator(target, space, target.lowering(i));
    for (long k = 0; k < powers[i]; ++k) v = f * v;
  }
  double n = v.norm();
  if (n <= 1e-14) throw std::logic_error("lowered_state: lowering annihilated the state");
  v.amplitudes /= n;
  return v;
}

ManyBodyOperator sym_projector(const TargetSubspace& target, SpacePtr space) {
  require_target_fits(target, *space);
  const int n = space->num_sites();
  GroupAlgebraElement avg(n);
  long fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  for (const auto& p : all_permutations(n)) avg.add_term(p, Rational(1, fact));
  auto sym = represent(avg, space, Side::right);
  std::set<int> all;
  for (int x = 0; x < n; ++x) all.insert(x);
  auto out = sym * region_projector(target, space, all);
  out.support = all;
  return out;
}

ScarTower make_scar_tower(const TargetSubspace& target, SpacePtr space) {
  require_target_fits(target, *space);
  const int n = space->num_sites();
  const int ds = target.dim();

  // All label-count compositions (c_0,...,c_{ds-1}) of n, enumerated with
  // c_0 ascending (so the all-lowered state comes first for d_s = 2).
  std::vector<std::vector<int>> compositions;
  std::vector<int> acc(ds, 0);
  auto rec = [&](auto&& self, int slot, int left) -> void {
    if (slot == ds - 1) {
      acc[slot] = left;
      compositions.push_back(acc);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      acc[slot] = c;
      self(self, slot + 1, left - c);
    }
  };
  rec(rec, 0, n);

  ScarTower tower{space, target, {}, {}, {}};
  for (const auto& counts : compositions) {
    WeightConfig config;
    for (int label = 0; label < ds; ++label)
      for (int k = 0; k < counts[label]; ++k) config.labels.push_back(label);
    tower.states.push_back(weight_basis_state(target, space, config));
    tower.total_weights.push_back(config.total_weight(target));
    tower.configs.push_back(std::move(config));
  }
  return tower;
}

Matrix ScarTower::state_matrix() const {
  Matrix m(space->dim(), size());
  for (int k = 0; k < size(); ++k) m.col(k) = states[k].amplitudes;
  return m;
}

StateVector xy_scar_state(SpacePtr space, int n, bool gauged) {
  const int L = space->num_sites();
  if (L % 2 != 0) throw std::invalid_argument("xy_scar_state: L must be even");
  for (int x = 0; x < L; ++x)
    if (space->site_dim(x) != 3)
      throw std::invalid_argument("xy_scar_state: spin-1 chain required");
  if (n < 0 || n > L) throw std::invalid_argument("xy_scar_state: n out of range");

  // basis order (|+>,|0>,|->): digit 0 = |+>, digit 2 = |->
  Vector amps = Vector::Zero(space->dim());
  std::vector<int> digits(L, 2);
  std::vector<int> subset(n);
  for (int i = 0; i < n; ++i) subset[i] = i;
  while (true) {
    std::fill(digits.begin(), digits.end(), 2);
    double sign = 1.0;
    for (int x : subset) {
      digits[x] = 0;
      if (!gauged && (x + 1) % 2 == 1) sign = -sign;  // (-1)^x with x 1-based
    }
    amps[space->encode(digits)] = sign;
    if (n == 0) break;
    int i = n - 1;
    while (i >= 0 && subset[i] == L - n + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < n; ++j) subset[j] = subset[j - 1] + 1;
  }
  amps /= amps.norm();
  return {std::move(space), std::move(amps)};
}

StateVector xy_scar_state(int L, int n, bool gauged) {
  return xy_scar_state(make_chain_space(L, 3, true), n, gauged);
}

}  // namespace qscar
