#include "qscar/models.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <numeric>
#include <sstream>

namespace qscar {

Matrix spin1_sz() {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(2, 2) = -1.0;
  return m;
}

Matrix spin1_sp() {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = std::sqrt(2.0);
  m(1, 2) = std::sqrt(2.0);
  return m;
}

Matrix spin1_sx() { return 0.5 * (spin1_sp() + spin1_sp().adjoint()); }

Matrix spin1_sy() {
  return Complex(0, -0.5) * (spin1_sp() - spin1_sp().adjoint());
}

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix pauli_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Matrix pauli_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix pauli_minus() { return pauli_plus().adjoint(); }

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Reorders the tensor slots of a local matrix so the sites are ascending.
Matrix normalize_site_order(const Matrix& m, std::vector<int>& sites, int d) {
  const int k = static_cast<int>(sites.size());
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sites[a] < sites[b]; });
  bool sorted = true;
  for (int i = 0; i < k; ++i)
    if (order[i] != i) sorted = false;
  if (sorted) return m;

  long dim = m.rows();
  std::vector<long> strides(k, 1);
  for (int i = k - 2; i >= 0; --i) strides[i] = strides[i + 1] * d;
  auto remap = [&](long idx) {
    std::vector<int> digits(k);
    for (int i = 0; i < k; ++i) digits[i] = static_cast<int>((idx / strides[i]) % d);
    long out = 0;
    for (int i = 0; i < k; ++i) out += static_cast<long>(digits[order[i]]) * strides[i];
    return out;
  };
  Matrix out(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c) out(remap(r), remap(c)) = m(r, c);
  std::vector<int> new_sites(k);
  for (int i = 0; i < k; ++i) new_sites[i] = sites[order[i]];
  sites = new_sites;
  return out;
}

}  // namespace

SpacePtr ModelSpec::make_space() const {
  return qscar::make_space(std::vector<int>(graph.num_sites(), site_dim), graph);
}

TargetSubspace ModelSpec::make_target() const {
  return TargetSubspace::from_indices(site_dim, target_indices);
}

double ModelSpec::coupling_value(const std::string& name) const {
  if (name.empty()) return 1.0;
  auto it = couplings.find(name);
  if (it == couplings.end())
    throw ValidationError("coupling '" + name + "' is not defined");
  return it->second;
}

ManyBodyOperator ModelSpec::assemble(SpacePtr space) const {
  auto out = identity_operator(space);
  out.matrix.setZero();
  out.support.clear();
  for (const auto& term : terms)
    out += Complex(coupling_value(term.coupling)) * embed(term.matrix, term.sites, space);
  return out;
}

std::vector<std::pair<ManyBodyOperator, std::set<int>>> ModelSpec::assembled_terms(
    SpacePtr space) const {
  std::map<std::set<int>, ManyBodyOperator> grouped;
  for (const auto& term : terms) {
    std::set<int> region(term.sites.begin(), term.sites.end());
    auto op = Complex(coupling_value(term.coupling)) * embed(term.matrix, term.sites, space);
    auto it = grouped.find(region);
    if (it == grouped.end())
      grouped.emplace(region, std::move(op));
    else
      it->second += op;
  }
  std::vector<std::pair<ManyBodyOperator, std::set<int>>> out;
  for (auto& [region, op] : grouped) out.emplace_back(std::move(op), region);
  return out;
}

void ModelSpec::validate() const {
  if (site_dim < 2) throw ValidationError("site dim must be >= 2");
  if (target_indices.empty()) throw ValidationError("target subspace is empty");
  std::set<int> seen;
  for (int t : target_indices) {
    if (t < 0 || t >= site_dim)
      throw ValidationError("target basis index out of range");
    if (!seen.insert(t).second) throw ValidationError("duplicate target basis index");
  }
  const long local_dim = site_dim;
  std::map<std::vector<int>, Matrix> by_sites;
  for (const auto& term : terms) {
    std::set<int> distinct(term.sites.begin(), term.sites.end());
    if (distinct.size() != term.sites.size()) throw ValidationError("duplicate site in term");
    long want = 1;
    for (int s : term.sites) {
      if (s < 0 || s >= graph.num_sites())
        throw ValidationError("term site index out of range");
      want *= local_dim;
    }
    if (term.matrix.rows() != want || term.matrix.cols() != want)
      throw ValidationError("term matrix dimension mismatch");
    std::vector<int> sites = term.sites;
    Matrix m = normalize_site_order(Complex(coupling_value(term.coupling)) * term.matrix,
                                    sites, site_dim);
    auto it = by_sites.find(sites);
    if (it == by_sites.end())
      by_sites.emplace(sites, std::move(m));
    else
      it->second += m;
  }
  for (const auto& [sites, sum] : by_sites) {
    if ((sum - sum.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
      std::ostringstream os;
      os << "terms on sites (";
      for (size_t i = 0; i < sites.size(); ++i) os << (i ? "," : "") << sites[i] + 1;
      os << ") do not sum to a Hermitian operator";
      throw ValidationError(os.str());
    }
  }
}

ParseError::ParseError(int line, int col, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                         ": " + msg),
      line(line),
      col(col) {}

namespace {

struct Line {
  int number;
  std::string text;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int column_of(const std::string& raw, const std::string& token) {
  size_t pos = raw.find(token);
  return pos == std::string::npos ? 1 : static_cast<int>(pos) + 1;
}

}  // namespace

ModelSpec load_model(const std::string& config_text) {
  std::vector<Line> lines;
  {
    std::istringstream is(config_text);
    std::string raw;
    int num = 0;
    while (std::getline(is, raw)) {
      ++num;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      if (!trim(raw).empty()) lines.push_back({num, raw});
    }
  }

  int num_sites = -1;
  std::set<std::pair<int, int>> edges;
  int dim = -1;
  std::vector<int> target;
  std::vector<ModelTerm> terms;
  std::map<std::string, double> couplings;

  std::string section;
  ModelTerm current;
  bool in_term = false;
  long rows_expected = 0;
  std::vector<std::vector<Complex>> rows;

  auto flush_term = [&](int line) {
    if (!in_term) return;
    if (static_cast<long>(rows.size()) != rows_expected)
      throw ParseError(line, 1,
                       "term has " + std::to_string(rows.size()) + " rows, expected " +
                           std::to_string(rows_expected));
    Matrix m(rows_expected, rows_expected);
    for (long r = 0; r < rows_expected; ++r)
      for (long c = 0; c < rows_expected; ++c) m(r, c) = rows[r][c];
    current.matrix = std::move(m);
    terms.push_back(current);
    current = ModelTerm{};
    rows.clear();
    in_term = false;
  };

  for (const auto& line : lines) {
    std::string text = trim(line.text);
    if (text.front() == '[') {
      if (text.back() != ']')
        throw ParseError(line.number, column_of(line.text, text), "malformed section header");
      flush_term(line.number);
      section = text.substr(1, text.size() - 2);
      if (section == "term") {
        if (dim < 0)
          throw ParseError(line.number, 1, "[term] must come after [site]");
        in_term = true;
      } else if (section != "lattice" && section != "site" && section != "couplings") {
        throw ParseError(line.number, column_of(line.text, section),
                         "unknown section [" + section + "]");
      }
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(line.number, column_of(line.text, text), "expected 'key = value'");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    auto bad_value = [&](const std::string& msg) {
      return ParseError(line.number, column_of(line.text, value.empty() ? key : value), msg);
    };

    if (section == "lattice") {
      if (key == "sites") {
        try {
          num_sites = std::stoi(value);
        } catch (...) {
          throw bad_value("bad site count '" + value + "'");
        }
        if (num_sites < 1) throw bad_value("site count must be positive");
      } else if (key == "edges") {
        std::istringstream vs(value);
        std::string tok;
        while (vs >> tok) {
          auto dash = tok.find('-');
          if (dash == std::string::npos)
            throw ParseError(line.number, column_of(line.text, tok),
                             "edge '" + tok + "' must look like a-b");
          int a = 0, b = 0;
          try {
            a = std::stoi(tok.substr(0, dash));
            b = std::stoi(tok.substr(dash + 1));
          } catch (...) {
            throw ParseError(line.number, column_of(line.text, tok), "bad edge '" + tok + "'");
          }
          if (num_sites < 1)
            throw ParseError(line.number, 1, "edges must come after sites");
          if (a < 1 || b < 1 || a > num_sites || b > num_sites)
            throw ParseError(line.number, column_of(line.text, tok),
                             "edge site index out of range [1," + std::to_string(num_sites) + "]");
          edges.insert({std::min(a, b) - 1, std::max(a, b) - 1});
        }
      } else {
        throw bad_value("unknown lattice key '" + key + "'");
      }
    } else if (section == "site") {
      if (key == "dim") {
        try {
          dim = std::stoi(value);
        } catch (...) {
          throw bad_value("bad dim '" + value + "'");
        }
      } else if (key == "target") {
        std::istringstream vs(value);
        int idx;
        while (vs >> idx) {
          if (dim < 0) throw ParseError(line.number, 1, "target must come after dim");
          if (idx < 1 || idx > dim)
            throw bad_value("target index out of range [1," + std::to_string(dim) + "]");
          target.push_back(idx - 1);
        }
      } else {
        throw bad_value("unknown site key '" + key + "'");
      }
    } else if (section == "term") {
      if (key == "sites") {
        std::istringstream vs(value);
        int s;
        current.sites.clear();
        while (vs >> s) {
          if (num_sites < 1) throw ParseError(line.number, 1, "[lattice] must come first");
          if (s < 1 || s > num_sites)
            throw bad_value("site index " + std::to_string(s) + " out of range [1," +
                            std::to_string(num_sites) + "]");
          current.sites.push_back(s - 1);
        }
        rows_expected = 1;
        for (size_t i = 0; i < current.sites.size(); ++i) rows_expected *= dim;
        rows.clear();
      } else if (key == "coupling") {
        current.coupling = value;
      } else if (key == "row") {
        if (current.sites.empty())
          throw ParseError(line.number, 1, "row before sites in [term]");
        std::istringstream vs(value);
        std::vector<Complex> row;
        double re, im;
        while (vs >> re) {
          if (!(vs >> im))
            throw bad_value("row needs an even count of numbers (re im pairs)");
          row.emplace_back(re, im);
        }
        if (static_cast<long>(row.size()) != rows_expected)
          throw bad_value("row has " + std::to_string(row.size()) + " entries, expected " +
                          std::to_string(rows_expected));
        rows.push_back(std::move(row));
      } else {
        throw bad_value("unknown term key '" + key + "'");
      }
    } else if (section == "couplings") {
      try {
        size_t pos = 0;
        couplings[key] = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
      } catch (...) {
        throw bad_value("bad coupling value '" + value + "'");
      }
    } else {
      throw ParseError(line.number, 1, "content before any section header");
    }
  }
  flush_term(lines.empty() ? 1 : lines.back().number);

  if (num_sites < 1) throw ValidationError("config has no [lattice] sites");
  if (dim < 2) throw ValidationError("config has no valid [site] dim");
  if (target.empty()) {
    target.resize(dim);
    std::iota(target.begin(), target.end(), 0);
  }

  ModelSpec spec{LatticeGraph(num_sites, std::move(edges)), dim, std::move(target),
                 std::move(terms), std::move(couplings)};
  spec.validate();
  return spec;
}

std::string to_config_text(const ModelSpec& spec) {
  std::ostringstream os;
  os << "[lattice]\n";
  os << "sites = " << spec.graph.num_sites() << "\n";
  os << "edges =";
  for (auto [a, b] : spec.graph.edges()) os << " " << a + 1 << "-" << b + 1;
  os << "\n[site]\n";
  os << "dim = " << spec.site_dim << "\n";
  os << "target =";
  for (int t : spec.target_indices) os << " " << t + 1;
  os << "\n";
  for (const auto& term : spec.terms) {
    os << "[term]\n";
    os << "sites =";
    for (int s : term.sites) os << " " << s + 1;
    os << "\n";
    if (!term.coupling.empty()) os << "coupling = " << term.coupling << "\n";
    for (long r = 0; r < term.matrix.rows(); ++r) {
      os << "row =";
      for (long c = 0; c < term.matrix.cols(); ++c)
        os << " " << format_double(term.matrix(r, c).real()) << " "
           << format_double(term.matrix(r, c).imag());
      os << "\n";
    }
  }
  if (!spec.couplings.empty()) {
    os << "[couplings]\n";
    for (const auto& [name, v] : spec.couplings)
      os << name << " = " << format_double(v) << "\n";
  }
  return os.str();
}

XYModel build_xy(int L, double J, double h, double D, bool periodic) {
  if (L % 2 != 0) throw std::invalid_argument("build_xy: L must be even");
  if (L < 2 || L > 7) throw std::invalid_argument("build_xy: L must be in [2,7]");

  Matrix bond = kron(spin1_sx(), spin1_sx()) + kron(spin1_sy(), spin1_sy());
  Matrix sz = spin1_sz();
  ModelSpec spec{LatticeGraph::chain(L, periodic), 3, {0, 2}, {}, {
      {"J", J}, {"h", h}, {"D", D}}};
  for (int x = 0; x < L; ++x) {
    int y = x + 1;
    if (y == L) {
      if (!periodic) break;
      y = 0;
    }
    spec.terms.push_back({{x, y}, bond, "J"});
  }
  for (int x = 0; x < L; ++x) {
    spec.terms.push_back({{x}, sz, "h"});
    spec.terms.push_back({{x}, sz * sz, "D"});
  }
  auto space = spec.make_space();
  auto H = spec.assemble(space);
  return {space, std::move(H), std::move(spec), J, h, D};
}

ManyBodyOperator gauge_unitary(SpacePtr space) {
  const int L = space->num_sites();
  for (int x = 0; x < L; ++x)
    if (space->site_dim(x) != 3)
      throw std::invalid_argument("gauge_unitary: spin-1 chain required");
  Matrix u = Matrix::Zero(space->dim(), space->dim());
  std::vector<int> digits(L);
  for (long i = 0; i < space->dim(); ++i) {
    space->decode(i, digits);
    double phase = 1.0;
    for (int x = 0; x < L; ++x)
      if (digits[x] == 0 && (x + 1) % 2 == 1) phase = -phase;  // e^{-i pi x}, x 1-based
    u(i, i) = phase;
  }
  std::set<int> support;
  for (int x = 0; x < L; ++x) support.insert(x);
  return {std::move(space), std::move(u), support};
}

XySmTerms xy_sm_terms(int L, double J, double h, double D) {
  if (L % 2 != 0) throw std::invalid_argument("xy_sm_terms: L must be even");
  // two-site basis kets in the (|+>,|0>,|->) digit convention
  auto ket = [](int a, int b) {
    Vector v = Vector::Zero(9);
    v[a * 3 + b] = 1.0;
    return v;
  };
  const int P = 0, O = 1, M = 2;
  auto dyad = [](const Vector& a, const Vector& b) { return Matrix(a * b.adjoint()); };

  Matrix p1 = Matrix::Zero(9, 9);
  {
    Matrix proj0 = Matrix::Zero(3, 3);
    proj0(O, O) = 1.0;
    p1 = kron(proj0, Matrix::Identity(3, 3)) + kron(Matrix::Identity(3, 3), proj0) -
         dyad(ket(O, O), ket(O, O));
  }
  Vector singlet = ket(P, M) - ket(M, P);
  Matrix p2 = 0.5 * dyad(singlet, singlet);

  XySmTerms out;
  for (int x1 = 1; x1 <= L; ++x1) {  // paper's 1-based site index
    double stag = (x1 % 2 == 0) ? 1.0 : -1.0;
    Matrix h1 = J * (-dyad(ket(O, P), ket(P, O)) - dyad(ket(P, O), ket(O, P)) +
                     dyad(ket(O, M), ket(M, O)) + dyad(ket(M, O), ket(O, M)));
    h1 += stag * J * dyad(singlet, ket(O, O));
    Matrix h2 = stag * J * dyad(ket(O, O), singlet);
    out.bonds.push_back({{x1 - 1, x1 % L}, std::move(h1), p1, std::move(h2), p2});
  }
  Matrix onsite = h * spin1_sz() + D * spin1_sz() * spin1_sz();
  for (int x = 0; x < L; ++x) out.onsite.push_back(onsite);
  return out;
}

DMModel build_dm_chain(int N, bool periodic) {
  if (periodic && N < 3)
    throw std::invalid_argument("build_dm_chain: periodic chain needs N >= 3");
  if (N < 2) throw std::invalid_argument("build_dm_chain: N >= 2 required");
  Matrix bond = kron(pauli_z(), pauli_x()) - kron(pauli_x(), pauli_z());
  ModelSpec spec{LatticeGraph::chain(N, periodic), 2, {0, 1}, {}, {}};
  for (int x = 0; x < N; ++x) {
    int y = x + 1;
    if (y == N) {
      if (!periodic) break;
      y = 0;
    }
    spec.terms.push_back({{x, y}, bond, ""});
  }
  auto space = spec.make_space();
  auto H = spec.assemble(space);
  return {space, std::move(H), std::move(spec)};
}

}  // namespace qscar
