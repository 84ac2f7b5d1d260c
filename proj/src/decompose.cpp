#include "qscar/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qscar {

namespace {

std::set<int> all_sites(const HilbertSpace& space) {
  std::set<int> out;
  for (int x = 0; x < space.num_sites(); ++x) out.insert(x);
  return out;
}

std::string site_set_string(const std::set<int>& sites) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int x : sites) {
    if (!first) os << ",";
    os << x + 1;  // 1-based in reports
    first = false;
  }
  os << "}";
  return os.str();
}

Matrix kron_power(const Matrix& w, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    Matrix next(out.rows() * w.rows(), out.cols() * w.cols());
    for (long i = 0; i < out.rows(); ++i)
      for (long j = 0; j < out.cols(); ++j)
        next.block(i * w.rows(), j * w.cols(), w.rows(), w.cols()) = out(i, j) * w;
    out = std::move(next);
  }
  return out;
}

/// Permutations of the full site set that fix everything outside `region`.
std::vector<Permutation> region_permutations(const std::set<int>& region, int n) {
  std::vector<int> sites(region.begin(), region.end());
  std::vector<int> target = sites;
  std::vector<Permutation> out;
  do {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (size_t k = 0; k < sites.size(); ++k) img[sites[k]] = target[k];
    out.push_back(Permutation(std::move(img)));
  } while (std::next_permutation(target.begin(), target.end()));
  return out;
}

}  // namespace

ManyBodyOperator symmetrize(const ManyBodyOperator& op) {
  const auto& space = *op.space;
  if (!space.homogeneous())
    throw std::invalid_argument("symmetrize: heterogeneous site dimensions");
  const long dim = space.dim();
  Matrix acc = Matrix::Zero(dim, dim);
  long count = 0;
  for (const auto& sigma : all_permutations(space.num_sites())) {
    auto map = basis_permutation(sigma, space);
    for (long j = 0; j < dim; ++j) {
      const long mj = map[j];
      for (long i = 0; i < dim; ++i) acc(map[i], mj) += op.matrix(i, j);
    }
    ++count;
  }
  acc /= static_cast<double>(count);
  return {op.space, std::move(acc), all_sites(space)};
}

InvarianceError::InvarianceError(int state_index, const std::string& label, double residual)
    : std::runtime_error("scar-manifold invariance violated by tower state " +
                         std::to_string(state_index) + " (weights " + label +
                         "), residual " + format_double(residual)),
      state_index(state_index),
      residual(residual) {}

HamiltonianSplit split_hamiltonian(const ManyBodyOperator& H, const ScarTower& tower,
                                   double rel_tol) {
  const double scale = H.frobenius_norm();
  Matrix v = tower.state_matrix();
  double worst = 0.0;
  int worst_index = -1;
  for (int k = 0; k < tower.size(); ++k) {
    Vector w = H.matrix * tower.states[k].amplitudes;
    double r = (w - v * (v.adjoint() * w)).norm();
    if (r > worst) {
      worst = r;
      worst_index = k;
    }
  }
  if (worst > rel_tol * std::max(scale, 1e-300))
    throw InvarianceError(worst_index, tower.configs[worst_index].to_string(), worst);

  auto hz = symmetrize(H);
  auto ha = H;
  ha -= hz;
  return {std::move(ha), std::move(hz), worst};
}

std::vector<TelescopeTerm> telescoped_transposition(int a, int b, const LatticeGraph& graph,
                                                    int degree) {
  if (a == b) throw std::invalid_argument("telescoped_transposition: a == b");
  auto path = graph.shortest_path(a, b);
  const int len = static_cast<int>(path.size()) - 1;
  std::vector<std::pair<int, int>> pairs;
  for (int l = 1; l <= len; ++l) pairs.emplace_back(path[l - 1], path[l]);
  for (int l = len - 1; l >= 1; --l) pairs.emplace_back(path[l - 1], path[l]);

  std::vector<TelescopeTerm> out;
  Permutation prefix = Permutation::identity(degree);
  Permutation full = prefix;
  for (const auto& [x, y] : pairs) {
    out.push_back({prefix, {x, y}});
    prefix = prefix.compose(Permutation::transposition(degree, x, y));
  }
  full = prefix;
  if (!(full == Permutation::transposition(degree, a, b)))
    throw std::logic_error("telescoped_transposition: chain product != t_{a,b}");
  return out;
}

CosetSplit coset_split(const YoungTableau& t) {
  if (t.diagram.num_rows() < 2)
    throw std::invalid_argument("coset_split: tableau has a single row");
  std::vector<int> col0;
  for (const auto& row : t.rows) col0.push_back(row[0]);
  const int a = col0[0], b = col0[1];

  // sign of q restricted to the first column
  std::map<int, int> col0_index;
  for (size_t k = 0; k < col0.size(); ++k) col0_index[col0[k]] = static_cast<int>(k);
  auto restricted_even = [&](const Permutation& q) {
    std::vector<int> sub(col0.size());
    for (size_t k = 0; k < col0.size(); ++k) sub[k] = col0_index.at(q(col0[k]));
    return Permutation(std::move(sub)).sign() == 1;
  };

  GroupAlgebraElement coset_sum(t.diagram.size());
  for (const auto& q : col_group(t))
    if (restricted_even(q)) coset_sum.add_term(q, Rational(q.sign()));
  return {ga_multiply(row_symmetrizer(t), coset_sum), a, b};
}

ProjectorDecomposition local_projector_decomposition(const ManyBodyOperator& O,
                                                     const TargetSubspace& target,
                                                     const ScarTower& tower,
                                                     double rel_tol) {
  auto space = O.space;
  const int n = space->num_sites();
  const double scale = std::max(O.frobenius_norm(), 1e-300);
  for (int k = 0; k < tower.size(); ++k) {
    double r = (O.matrix * tower.states[k].amplitudes).norm();
    if (r > rel_tol * scale)
      throw std::invalid_argument(
          "local_projector_decomposition: operator does not annihilate tower state " +
          std::to_string(k) + " (residual " + format_double(r) + ")");
  }

  ProjectorDecomposition out;
  Matrix reconstruction = Matrix::Zero(space->dim(), space->dim());
  const double prune = 1e-13 * scale;

  // (a) off-target peel-off by inclusion-exclusion over 1 - P^s_x.
  if (target.dim() < target.parent_dim()) {
    std::vector<std::set<int>> subsets;
    for (long mask = 1; mask < (1L << n); ++mask) {
      std::set<int> y;
      for (int x = 0; x < n; ++x)
        if (mask & (1L << x)) y.insert(x);
      subsets.push_back(std::move(y));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    auto one = identity_operator(space);
    for (const auto& y : subsets) {
      auto q = identity_operator(space);
      for (int x : y) q = q * (one - site_projector(target, space, x));
      q.support = y;
      double sign = (y.size() % 2 == 1) ? 1.0 : -1.0;
      auto coeff = Complex(sign) * O;
      Matrix contrib = coeff.matrix * q.matrix;
      if (contrib.norm() <= prune) continue;
      reconstruction += contrib;
      out.terms.push_back({std::move(coeff), std::move(q), y,
                           y.size() == 1 ? TermKind::one_site : TermKind::off_target});
    }
  }

  // (b) per-tableau telescoped terms on O P^s.
  auto ops = O * region_projector(target, space, all_sites(*space));
  auto one = identity_operator(space);
  for (const auto& res : young_resolution(n)) {
    if (res.tableau.diagram.num_rows() < 2) continue;  // one-row tableau: O P^s u_T = 0
    auto split = coset_split(res.tableau);
    auto zg = ga_multiply(res.z, split.prefix);
    for (const auto& tele : telescoped_transposition(split.a, split.b, space->graph(), n)) {
      auto word = ga_multiply(zg, GroupAlgebraElement::of(tele.prefix));
      auto coeff = Complex(2.0) * (ops * represent(word, space, Side::right));
      auto proj = Complex(0.5) * (one - swap_operator(tele.edge.first, tele.edge.second, space));
      proj.support = {tele.edge.first, tele.edge.second};
      Matrix contrib = coeff.matrix * proj.matrix;
      if (contrib.norm() <= prune) continue;
      reconstruction += contrib;
      out.terms.push_back({std::move(coeff), std::move(proj),
                           {tele.edge.first, tele.edge.second}, TermKind::two_site_swap});
    }
  }

  out.residual = (O.matrix - reconstruction).norm();
  return out;
}

CheckReport decomposition_certificate(const ProjectorDecomposition& decomp,
                                      const ManyBodyOperator& O, const ScarTower& tower,
                                      double rel_tol, double proj_tol) {
  CheckReport report;
  const double scale = std::max(O.frobenius_norm(), 1e-300);
  report.add("reconstruction", decomp.residual / scale, rel_tol);

  double idem = 0.0, herm = 0.0, annihilation = 0.0;
  bool edges_ok = true;
  for (const auto& term : decomp.terms) {
    const Matrix& p = term.projector.matrix;
    idem = std::max(idem, (p * p - p).norm());
    herm = std::max(herm, (p - p.adjoint()).norm());
    for (const auto& psi : tower.states)
      annihilation = std::max(annihilation, (p * psi.amplitudes).norm());
    if (term.kind == TermKind::two_site_swap) {
      auto it = term.support.begin();
      int x = *it++;
      int y = *it;
      if (!O.space->graph().has_edge(x, y)) edges_ok = false;
    }
  }
  report.add("projectors hermitian-idempotent", std::max(idem, herm), 1e-12);
  report.add("projectors annihilate tower", annihilation, proj_tol);
  report.add("two-site supports on graph edges", edges_ok ? 0.0 : 1.0, 0.5);
  return report;
}

LocalSplit local_split(const std::vector<std::pair<ManyBodyOperator, std::set<int>>>& terms,
                       const TargetSubspace& target) {
  LocalSplit out;
  for (const auto& [h, region] : terms) {
    auto space = h.space;
    const int n = space->num_sites();
    for (int x : h.support)
      if (!region.count(x))
        throw std::invalid_argument("local_split: term support exceeds its region");

    auto one = identity_operator(space);
    auto ps = region_projector(target, space, region);
    LocalSplitRecord rec{region,
                         h * (one - ps),
                         (one - ps) * h * ps,
                         ps * h * ps,
                         identity_operator(space),
                         identity_operator(space),
                         identity_operator(space),
                         identity_operator(space)};

    // local symmetrizer over permutations of the region
    auto perms = region_permutations(region, n);
    Matrix sym = Matrix::Zero(space->dim(), space->dim());
    for (const auto& p : perms) {
      auto map = basis_permutation(p, *space);
      for (long i = 0; i < space->dim(); ++i) sym(map[i], i) += 1.0;
    }
    sym /= static_cast<double>(perms.size());
    rec.young_head = rec.in_target;
    rec.young_head.matrix = rec.in_target.matrix * sym;
    rec.young_tail = rec.in_target - rec.young_head;

    // weight split in the Cartan-adapted product basis
    const int d = target.parent_dim(), ds = target.dim();
    Matrix w(d, d);
    w.leftCols(ds) = target.basis();
    w.rightCols(d - ds) = target.complement_basis();
    Matrix wfull = kron_power(w, n);
    Matrix adapted = wfull.adjoint() * rec.young_head.matrix * wfull;

    std::vector<std::vector<int>> weights(space->dim());
    std::vector<int> digits(n);
    for (long i = 0; i < space->dim(); ++i) {
      space->decode(i, digits);
      std::vector<int> total(target.num_cartans(), 0);
      for (int x = 0; x < n; ++x) {
        if (digits[x] < ds) {
          auto lw = target.label_weight(digits[x]);
          for (size_t q = 0; q < lw.size(); ++q) total[q] += lw[q];
        }
      }
      weights[i] = std::move(total);
    }
    Matrix masked = adapted;
    for (long c = 0; c < masked.cols(); ++c)
      for (long r = 0; r < masked.rows(); ++r)
        if (weights[r] != weights[c]) masked(r, c) = 0.0;

    rec.weight_preserving = rec.in_target;
    rec.weight_preserving.matrix = wfull * masked * wfull.adjoint();
    rec.weight_non_preserving = rec.young_head - rec.weight_preserving;
    out.records.push_back(std::move(rec));
  }
  return out;
}

namespace {

/// Canonical permutation pi with n_x = nprime_{pi(x)} for configurations with
/// equal label multisets.
Permutation match_configs(const std::vector<int>& n, const std::vector<int>& nprime) {
  const int sites = static_cast<int>(n.size());
  std::map<int, std::vector<int>> pos_n, pos_np;
  for (int x = 0; x < sites; ++x) {
    pos_n[n[x]].push_back(x);
    pos_np[nprime[x]].push_back(x);
  }
  std::vector<int> img(sites, -1);
  for (const auto& [label, xs] : pos_n) {
    const auto& ys = pos_np.at(label);
    for (size_t k = 0; k < xs.size(); ++k) img[xs[k]] = ys[k];
  }
  return Permutation(std::move(img));
}

}  // namespace

std::vector<CartanFactorTerm> cartan_permutation_factorization(const ManyBodyOperator& O,
                                                               const TargetSubspace& target,
                                                               double tol) {
  auto space = O.space;
  const int n = space->num_sites();
  const int d = target.parent_dim(), ds = target.dim();
  const double scale = std::max(O.max_abs(), 1e-300);

  auto region = [&] {
    std::set<int> s;
    for (int x = 0; x < n; ++x) s.insert(x);
    return s;
  }();
  auto ps = region_projector(target, space, region);
  if ((O.matrix - ps.matrix * O.matrix * ps.matrix).norm() > tol * (1 + scale))
    throw std::invalid_argument(
        "cartan_permutation_factorization: operator is not supported on the target product space");
  for (int i = 0; i < target.num_cartans(); ++i) {
    auto c = collective_operator(target, space, target.cartan(i));
    if ((O.matrix * c.matrix - c.matrix * O.matrix).cwiseAbs().maxCoeff() > tol * (1 + scale))
      throw std::invalid_argument(
          "cartan_permutation_factorization: operator does not commute with collective Cartan " +
          std::to_string(i + 1));
  }

  Matrix w(d, d);
  w.leftCols(ds) = target.basis();
  w.rightCols(d - ds) = target.complement_basis();
  Matrix adapted = kron_power(w, n).adjoint() * O.matrix * kron_power(w, n);

  std::vector<CartanFactorTerm> out;
  std::vector<int> rdig(n), cdig(n);
  for (long c = 0; c < adapted.cols(); ++c)
    for (long r = 0; r < adapted.rows(); ++r) {
      if (std::abs(adapted(r, c)) <= 1e-13 * scale) continue;
      space->decode(r, rdig);
      space->decode(c, cdig);
      auto sorted_r = rdig, sorted_c = cdig;
      std::sort(sorted_r.begin(), sorted_r.end());
      std::sort(sorted_c.begin(), sorted_c.end());
      if (sorted_r != sorted_c)
        throw std::logic_error(
            "cartan_permutation_factorization: weight-violating entry above tolerance");
      // |n><n'| = |n><n| pi_hat with n_x = n'_{pi(x)}
      out.push_back({adapted(r, c), rdig, match_configs(rdig, cdig)});
    }
  return out;
}

std::vector<LadderFactorTerm> ladder_permutation_factorization(const ManyBodyOperator& O,
                                                               const TargetSubspace& target,
                                                               double tol) {
  if (target.dim() != 2)
    throw std::invalid_argument("ladder_permutation_factorization: d_s = 2 required");
  auto space = O.space;
  const int n = space->num_sites();
  const int d = target.parent_dim();
  const double scale = std::max(O.max_abs(), 1e-300);

  Matrix w(d, d);
  w.leftCols(2) = target.basis();
  w.rightCols(d - 2) = target.complement_basis();
  Matrix adapted = kron_power(w, n).adjoint() * O.matrix * kron_power(w, n);

  std::vector<LadderFactorTerm> out;
  std::vector<int> ket(n), bra(n);
  for (long c = 0; c < adapted.cols(); ++c)
    for (long r = 0; r < adapted.rows(); ++r) {
      if (std::abs(adapted(r, c)) <= tol * scale) continue;
      space->decode(r, ket);
      space->decode(c, bra);
      for (int x = 0; x < n; ++x)
        if (ket[x] > 1 || bra[x] > 1)
          throw std::invalid_argument(
              "ladder_permutation_factorization: entry outside the target product space");
      int ups_ket = static_cast<int>(std::count(ket.begin(), ket.end(), 0));
      int ups_bra = static_cast<int>(std::count(bra.begin(), bra.end(), 0));
      int sector = ups_ket > ups_bra ? 1 : (ups_ket < ups_bra ? -1 : 0);

      // Match so that ket_x <= bra_{pi(x)} (sector >= 0) or >= (sector < 0):
      // the strict positions must land on strict positions.
      std::vector<int> ket_strict, ket_free, bra_strict, bra_free;
      for (int x = 0; x < n; ++x) {
        int strict_label = sector >= 0 ? 1 : 0;
        (ket[x] == strict_label ? ket_strict : ket_free).push_back(x);
      }
      for (int x = 0; x < n; ++x) {
        int strict_label = sector >= 0 ? 1 : 0;
        (bra[x] == strict_label ? bra_strict : bra_free).push_back(x);
      }
      std::vector<int> img(n, -1);
      for (size_t k = 0; k < ket_strict.size(); ++k) img[ket_strict[k]] = bra_strict[k];
      std::vector<int> remaining;
      for (size_t k = ket_strict.size(); k < bra_strict.size(); ++k)
        remaining.push_back(bra_strict[k]);
      remaining.insert(remaining.end(), bra_free.begin(), bra_free.end());
      std::sort(remaining.begin(), remaining.end());
      for (size_t k = 0; k < ket_free.size(); ++k) img[ket_free[k]] = remaining[k];
      Permutation pi(std::move(img));

      std::vector<int> ladder;
      for (int x = 0; x < n; ++x)
        if (ket[x] != bra[pi(x)]) ladder.push_back(x);
      out.push_back({adapted(r, c), sector, std::move(ladder), ket, std::move(pi)});
    }
  return out;
}

ZeemanFit extract_zeeman(const ManyBodyOperator& H, const ScarTower& tower, double rel_tol) {
  const double scale = std::max(H.frobenius_norm(), 1e-300);
  std::vector<double> energies;
  std::ostringstream violations;
  bool ok = true;
  for (int k = 0; k < tower.size(); ++k) {
    const Vector& psi = tower.states[k].amplitudes;
    Vector w = H.matrix * psi;
    double e = psi.dot(w).real();
    double r = (w - e * psi).norm();
    if (r > rel_tol * scale) {
      ok = false;
      violations << " state " << k << " (weights " << tower.configs[k].to_string()
                 << ") residual " << format_double(r) << ";";
    }
    energies.push_back(e);
  }
  if (!ok)
    throw std::runtime_error("extract_zeeman: tower states are not eigenstates:" +
                             violations.str());

  const int nc = tower.target.num_cartans();
  const int k = tower.size();
  RealMatrix a(k, nc + 1);
  RealVector e(k);
  for (int i = 0; i < k; ++i) {
    a(i, 0) = 1.0;
    for (int q = 0; q < nc; ++q) a(i, q + 1) = tower.total_weights[i][q];
    e(i) = energies[i];
  }
  RealVector x = a.colPivHouseholderQr().solve(e);
  double residual = (a * x - e).cwiseAbs().maxCoeff();

  ZeemanFit fit;
  fit.constant = x(0);
  for (int q = 0; q < nc; ++q) fit.coefficients.push_back(x(q + 1));
  fit.residual = residual;
  fit.energies = std::move(energies);
  return fit;
}

CheckReport q_selection_rule_check(
    const std::vector<std::pair<ManyBodyOperator, std::set<int>>>& terms,
    const TargetSubspace& target, const ScarTower& tower, double tol) {
  CheckReport report;
  if (terms.empty()) return report;
  auto space = terms.front().first.space;
  auto one = identity_operator(space);

  auto q_proj = [&](const std::set<int>& y) {
    auto q = one;
    for (int x : y) q = q * (one - site_projector(target, space, x));
    q.support = y;
    return q;
  };

  // Distinct nonempty subsets of term regions.
  std::set<std::set<int>> subsets;
  for (const auto& [h, region] : terms) {
    std::vector<int> sites(region.begin(), region.end());
    for (long mask = 1; mask < (1L << sites.size()); ++mask) {
      std::set<int> y;
      for (size_t k = 0; k < sites.size(); ++k)
        if (mask & (1L << k)) y.insert(sites[k]);
      subsets.insert(std::move(y));
    }
  }

  // Grouped leakage operators G_Y = sum_{X >= Y} Q_Y P_{X\Y} h_X P_X.
  std::map<std::set<int>, ManyBodyOperator> grouped;
  for (const auto& y : subsets) {
    auto g = one;
    g.matrix.setZero();
    g.support.clear();
    bool any = false;
    for (const auto& [h, region] : terms) {
      if (!std::includes(region.begin(), region.end(), y.begin(), y.end())) continue;
      std::set<int> rest;
      std::set_difference(region.begin(), region.end(), y.begin(), y.end(),
                          std::inserter(rest, rest.begin()));
      g += q_proj(y) * region_projector(target, space, rest) * h *
           region_projector(target, space, region);
      any = true;
    }
    if (any) grouped.emplace(y, std::move(g));
  }

  for (const auto& [y, g] : grouped) {
    double r = 0.0;
    for (const auto& psi : tower.states)
      r = std::max(r, (g.matrix * psi.amplitudes).norm());
    report.add("group-annihilation Y=" + site_set_string(y), r, tol);
  }
  for (const auto& entry : grouped) {
    const auto& yp = entry.first;
    auto qp = q_proj(yp);
    for (const auto& [y, g] : grouped) {
      bool contained = std::includes(y.begin(), y.end(), yp.begin(), yp.end());
      double r = 0.0;
      for (const auto& psi : tower.states) {
        Vector gv = g.matrix * psi.amplitudes;
        Vector lhs = qp.matrix * gv;
        if (contained) lhs -= gv;
        r = std::max(r, lhs.norm());
      }
      report.add("selection-rule Y'=" + site_set_string(yp) + " Y=" + site_set_string(y), r,
                 tol);
    }
  }
  return report;
}

bool vandermonde_full_rank(int l, int b) {
  if (b < 0 || b >= l) throw std::invalid_argument("vandermonde_full_rank: need 0 <= b < l");
  const int rows = l - b, cols = l - b;
  const double j = (l - 1) / 2.0;
  RealMatrix v(rows, cols);
  for (int r = 0; r < rows; ++r) {
    double m = -j + b + r;
    double p = 1.0;
    for (int c = 0; c < cols; ++c) {
      v(r, c) = p;
      p *= m;
    }
  }
  Eigen::FullPivLU<RealMatrix> lu(v);
  return lu.rank() == cols;
}

CheckReport dm_constraint_check(const std::vector<ManyBodyOperator>& h_non_terms,
                                const TargetSubspace& target, const ScarTower& tower,
                                double tol) {
  CheckReport report;
  if (target.dim() != 2)
    throw std::invalid_argument("dm_constraint_check: d_s = 2 required");
  if (h_non_terms.empty()) {
    report.add("no weight-non-preserving terms", 0.0, tol);
    return report;
  }
  auto space = h_non_terms.front().space;
  const int n = space->num_sites();

  // lifted single-site operators
  Matrix sz_t = Matrix::Zero(2, 2);
  sz_t(0, 0) = 1.0;
  sz_t(1, 1) = -1.0;
  Matrix up_t = Matrix::Zero(2, 2);
  up_t(0, 1) = 1.0;
  Matrix dn_t = up_t.adjoint();
  Matrix proj_up = Matrix::Zero(2, 2), proj_dn = Matrix::Zero(2, 2);
  proj_up(0, 0) = 1.0;
  proj_dn(1, 1) = 1.0;
  const Matrix lsz = target.lift(sz_t), lup = target.lift(up_t), ldn = target.lift(dn_t);

  struct ClassData {
    Complex coeff_sum{0, 0};
    Matrix op_sum;
  };
  std::map<std::tuple<int, int, int>, ClassData> classes;  // (sector, a, b)

  double stray_weight_preserving = 0.0;
  for (const auto& h : h_non_terms) {
    for (const auto& term : ladder_permutation_factorization(h, target)) {
      if (term.sector == 0) {
        stray_weight_preserving = std::max(stray_weight_preserving, std::abs(term.coeff));
        continue;
      }
      std::vector<int> diag_sites;
      for (int x = 0; x < n; ++x)
        if (std::find(term.ladder_sites.begin(), term.ladder_sites.end(), x) ==
            term.ladder_sites.end())
          diag_sites.push_back(x);
      const int a = static_cast<int>(term.ladder_sites.size());
      const int nd = static_cast<int>(diag_sites.size());

      Matrix perm_mat = represent(term.perm, space, Side::left).matrix;
      Matrix ladder_mat = Matrix::Identity(space->dim(), space->dim());
      for (int x : term.ladder_sites)
        ladder_mat = ladder_mat * embed(term.sector > 0 ? lup : ldn, {x}, space).matrix;

      // expand diagonal projectors |l><l| = (1 + eps sz)/2 into sz monomials
      for (long mask = 0; mask < (1L << nd); ++mask) {
        int bcount = 0;
        double sign = 1.0;
        Matrix mono = ladder_mat;
        for (int k = 0; k < nd; ++k) {
          int x = diag_sites[k];
          double eps = term.ket_config[x] == 0 ? 1.0 : -1.0;
          if (mask & (1L << k)) {
            ++bcount;
            sign *= eps;
            mono = mono * embed(lsz, {x}, space).matrix;
          }
        }
        Complex c = term.coeff * sign / std::pow(2.0, nd);
        auto key = std::make_tuple(term.sector, a, bcount);
        auto it = classes.find(key);
        if (it == classes.end()) {
          ClassData data;
          data.coeff_sum = c;
          data.op_sum = c * (mono * perm_mat);
          classes.emplace(key, std::move(data));
        } else {
          it->second.coeff_sum += c;
          it->second.op_sum += c * (mono * perm_mat);
        }
      }
    }
  }
  report.add("no weight-preserving content", stray_weight_preserving, tol);

  for (const auto& [key, data] : classes) {
    auto [sector, a, b] = key;
    std::ostringstream label;
    label << "class (a=" << a << ",b=" << b << "," << (sector > 0 ? "+" : "-") << ")";
    report.add(label.str() + " coefficient sum", std::abs(data.coeff_sum), tol);

    ManyBodyOperator cls{space, data.op_sum, {}};
    auto sym = symmetrize(cls);
    double r = 0.0;
    for (const auto& psi : tower.states)
      r = std::max(r, (sym.matrix * psi.amplitudes).norm());
    report.add(label.str() + " symmetrized tower action", r, tol);
  }

  const int l = n + 1;  // collective spin j = n/2
  for (int b = 0; b < l; ++b)
    report.add("vandermonde full rank l=" + std::to_string(l) + " b=" + std::to_string(b),
               vandermonde_full_rank(l, b) ? 0.0 : 1.0, 0.5);
  return report;
}

}  // namespace qscar
