// qscar: build scar-tower models, verify their structure, and emit certified
// annihilator decompositions and spectral diagnostics.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qscar/decompose.hpp"
#include "qscar/models.hpp"
#include "qscar/permrep.hpp"
#include "qscar/scars.hpp"
#include "selftest.hpp"

using namespace qscar;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr long kDimCap = 4096;
constexpr int kDecomposeSiteCap = 5;

struct ModelOptions {
  std::string model = "xy";
  std::string config_path;
  int L = 4;
  double J = 1.0, h = 0.3, D = 0.1;
  int N = 4;
  bool open = false;
  double perturb = 0.0;
  int perturb_site = 1;  // 1-based
  unsigned perturb_seed = 1;
  double tol = 1e-9;
};

struct Bundle {
  std::string summary;
  SpacePtr space;
  ManyBodyOperator hamiltonian;  // model as given
  TargetSubspace target;
  bool gauged = false;           // true when the analysis view is U H U^dag
  ManyBodyOperator analysis_h;   // Hamiltonian the structural pipeline runs on
  ScarTower tower;               // weight-basis tower for analysis_h
  std::vector<std::pair<ManyBodyOperator, std::set<int>>> terms;  // local terms of analysis_h
  std::vector<StateVector> raw_states;  // tower of the as-given Hamiltonian
  std::vector<std::string> raw_labels;
  std::vector<std::vector<int>> raw_weights;
};

std::string short_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

Matrix random_hermitian(long dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix m(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (m + Matrix(m.adjoint()));
}

void apply_perturbation(Bundle& bundle, const ModelOptions& opt) {
  if (opt.perturb == 0.0) return;
  int site = opt.perturb_site - 1;
  if (site < 0 || site >= bundle.space->num_sites())
    throw std::invalid_argument("perturb-site out of range");
  auto field = Complex(opt.perturb) *
               embed(random_hermitian(bundle.space->site_dim(site), opt.perturb_seed), {site},
                     bundle.space);
  bundle.hamiltonian += field;
  if (bundle.gauged) {
    auto u = gauge_unitary(bundle.space);
    bundle.analysis_h += u * field * u.adjoint();
  } else {
    bundle.analysis_h += field;
  }
  bundle.terms.emplace_back(field, field.support);
  bundle.summary += " perturb=" + short_double(opt.perturb) + "@site" +
                    std::to_string(opt.perturb_site);
}

Bundle build_bundle(const ModelOptions& opt) {
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in)
      throw std::invalid_argument("cannot open config file '" + opt.config_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto spec = load_model(buffer.str());
    auto space = spec.make_space();
    if (space->dim() > kDimCap)
      throw std::invalid_argument("model dimension exceeds the desk-scale cap");
    auto target = spec.make_target();
    Bundle bundle{"config " + opt.config_path,
                  space,
                  spec.assemble(space),
                  target,
                  false,
                  spec.assemble(space),
                  make_scar_tower(target, space),
                  spec.assembled_terms(space),
                  {},
                  {},
                  {}};
    for (int k = 0; k < bundle.tower.size(); ++k) {
      bundle.raw_states.push_back(bundle.tower.states[k]);
      bundle.raw_labels.push_back("m=" + bundle.tower.configs[k].to_string());
      bundle.raw_weights.push_back(bundle.tower.total_weights[k]);
    }
    apply_perturbation(bundle, opt);
    return bundle;
  }
  if (opt.model == "xy") {
    auto model = build_xy(opt.L, opt.J, opt.h, opt.D, !opt.open);
    auto u = gauge_unitary(model.space);
    auto target = TargetSubspace::from_indices(3, {0, 2});
    std::ostringstream summary;
    summary << "xy L=" << opt.L << " J=" << short_double(opt.J) << " h="
            << short_double(opt.h) << " D=" << short_double(opt.D)
            << (opt.open ? " open" : " periodic");
    Bundle bundle{summary.str(),
                  model.space,
                  model.hamiltonian,
                  target,
                  true,
                  u * model.hamiltonian * u.adjoint(),
                  make_scar_tower(target, model.space),
                  {},
                  {},
                  {},
                  {}};
    auto sm = xy_sm_terms(opt.L, opt.J, opt.h, opt.D);
    for (const auto& bond : sm.bonds) {
      std::vector<int> sites{bond.edge.first, bond.edge.second};
      bundle.terms.emplace_back(
          embed(bond.h1 * bond.p1 + bond.h2 * bond.p2, sites, model.space),
          std::set<int>{sites.begin(), sites.end()});
    }
    for (int x = 0; x < opt.L; ++x)
      bundle.terms.emplace_back(embed(sm.onsite[x], {x}, model.space), std::set<int>{x});
    for (int n = 0; n <= opt.L; ++n) {
      bundle.raw_states.push_back(xy_scar_state(model.space, n, false));
      bundle.raw_labels.push_back("S^pi_" + std::to_string(n));
      bundle.raw_weights.push_back({2 * n - opt.L});
    }
    apply_perturbation(bundle, opt);
    return bundle;
  }
  if (opt.model == "dm") {
    if (opt.N > 12) throw std::invalid_argument("dm chain exceeds the desk-scale cap (N <= 12)");
    auto model = build_dm_chain(opt.N, !opt.open);
    auto target = TargetSubspace::full(2);
    std::ostringstream summary;
    summary << "dm N=" << opt.N << (opt.open ? " open" : " periodic");
    Bundle bundle{summary.str(),
                  model.space,
                  model.hamiltonian,
                  target,
                  false,
                  model.hamiltonian,
                  make_scar_tower(target, model.space),
                  model.spec.assembled_terms(model.space),
                  {},
                  {},
                  {}};
    for (int k = 0; k < bundle.tower.size(); ++k) {
      bundle.raw_states.push_back(bundle.tower.states[k]);
      bundle.raw_labels.push_back("dicke_" + std::to_string(k));
      bundle.raw_weights.push_back(bundle.tower.total_weights[k]);
    }
    apply_perturbation(bundle, opt);
    return bundle;
  }
  throw std::invalid_argument("unknown model '" + opt.model + "' (use xy, dm, or --config)");
}

void add_model_options(CLI::App* cmd, ModelOptions& opt) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--model", opt.model, "builtin model: xy or dm");
  cmd->add_option("--config", opt.config_path, "model config file");
  cmd->add_option("--L", opt.L, "chain length (xy)");
  cmd->add_option("--J", opt.J, "exchange coupling (xy)");
  cmd->add_option("--h", opt.h, "Zeeman field (xy)");
  cmd->add_option("--D", opt.D, "single-ion anisotropy (xy)");
  cmd->add_option("--N", opt.N, "chain length (dm)");
  cmd->add_flag("--open", opt.open, "open boundary conditions");
  cmd->add_option("--tol", opt.tol, "relative tolerance for checks");
  cmd->add_option("--perturb", opt.perturb, "strength of a random on-site field");
  cmd->add_option("--perturb-site", opt.perturb_site, "site of the perturbation (1-based)");
  cmd->add_option("--perturb-seed", opt.perturb_seed, "seed of the perturbation");
}

int cmd_verify_tower(const ModelOptions& opt) {
  auto bundle = build_bundle(opt);
  Report report;
  report.command = "verify-tower";
  report.kv("model", bundle.summary);
  report.kv("dim", bundle.space->dim());
  report.kv("tolerance", opt.tol);
  const double scale = std::max(bundle.hamiltonian.frobenius_norm(), 1e-300);

  std::vector<double> energies;
  for (size_t k = 0; k < bundle.raw_states.size(); ++k) {
    const auto& s = bundle.raw_states[k];
    Vector w = bundle.hamiltonian.matrix * s.amplitudes;
    double e = s.amplitudes.dot(w).real();
    double r = (w - e * s.amplitudes).norm() / scale;
    energies.push_back(e);
    report.kv("energy " + bundle.raw_labels[k], e);
    report.check("eigenstate " + bundle.raw_labels[k], r <= opt.tol, r, opt.tol);
  }

  const int k = static_cast<int>(bundle.raw_states.size());
  double gram_residual = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Complex g = inner(bundle.raw_states[a], bundle.raw_states[b]);
      gram_residual = std::max(gram_residual, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  report.check("tower orthonormal", gram_residual <= 1e-10, gram_residual, 1e-10);

  // affine fit of energies against total weights
  const int nc = static_cast<int>(bundle.raw_weights.front().size());
  RealMatrix a(k, nc + 1);
  RealVector e(k);
  for (int i = 0; i < k; ++i) {
    a(i, 0) = 1.0;
    for (int q = 0; q < nc; ++q) a(i, q + 1) = bundle.raw_weights[i][q];
    e(i) = energies[i];
  }
  RealVector x = a.colPivHouseholderQr().solve(e);
  double fit_residual = (a * x - e).cwiseAbs().maxCoeff();
  report.check("equidistant spectrum (affine in weights)", fit_residual <= opt.tol,
               fit_residual, opt.tol);
  if (nc == 1) {
    double spacing = 2.0 * x(1);
    report.kv("spacing", spacing);
    report.kv("degenerate", std::string(std::abs(spacing) < 1e-12 ? "true" : "false"));
  }
  report.kv("offset", x(0));

  std::cout << report.render();
  return report.failed ? kExitCheckFailed : kExitPass;
}

int cmd_decompose(const ModelOptions& opt, const std::string& dump_dir) {
  auto bundle = build_bundle(opt);
  if (bundle.space->num_sites() > kDecomposeSiteCap)
    throw std::invalid_argument(
        "decompose supports up to 5 sites (exact Young resolution cap)");
  Report report;
  report.command = "decompose";
  report.kv("model", bundle.summary);
  report.kv("gauge", std::string(bundle.gauged ? "applied" : "none"));
  report.kv("tolerance", opt.tol);

  HamiltonianSplit split = split_hamiltonian(bundle.analysis_h, bundle.tower, opt.tol);
  report.kv("invariance residual", split.invariance_residual);

  auto zeeman = extract_zeeman(bundle.analysis_h, bundle.tower, opt.tol);
  for (size_t q = 0; q < zeeman.coefficients.size(); ++q)
    report.kv("zeeman h_" + std::to_string(q + 1), zeeman.coefficients[q]);
  report.kv("zeeman constant", zeeman.constant);
  report.check("zeeman affine fit", zeeman.residual <= opt.tol, zeeman.residual, opt.tol);

  auto decomp = local_projector_decomposition(split.annihilator, bundle.target, bundle.tower,
                                              opt.tol);
  auto cert = decomposition_certificate(decomp, split.annihilator, bundle.tower, opt.tol);
  report.kv("annihilator norm", split.annihilator.frobenius_norm());
  report.kv("term count", static_cast<long>(decomp.terms.size()));
  report.merge_checks(cert);

  // per-term records with optional matrix dumps
  std::filesystem::path dir;
  if (!dump_dir.empty()) {
    dir = dump_dir;
    std::filesystem::create_directories(dir);
    std::ofstream h_out(dir / "hamiltonian.mat");
    write_matrix(h_out, bundle.analysis_h.matrix);
    std::ofstream ha_out(dir / "annihilator.mat");
    write_matrix(ha_out, split.annihilator.matrix);
    std::ofstream hz_out(dir / "zeeman.mat");
    write_matrix(hz_out, split.zeeman.matrix);
  }
  for (size_t k = 0; k < decomp.terms.size(); ++k) {
    const auto& term = decomp.terms[k];
    std::ostringstream line;
    line << "index=" << k << " kind=";
    switch (term.kind) {
      case TermKind::one_site: line << "one-site"; break;
      case TermKind::two_site_swap: line << "two-site-swap"; break;
      case TermKind::off_target: line << "off-target"; break;
    }
    line << " support={";
    bool first = true;
    for (int x : term.support) {
      if (!first) line << ",";
      line << x + 1;
      first = false;
    }
    line << "}";
    std::string coeff_ref = "-", proj_ref = "-";
    if (!dump_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof(name), "term%03zu", k);
      coeff_ref = std::string(name) + "_coeff.mat";
      proj_ref = std::string(name) + "_proj.mat";
      std::ofstream c_out(dir / coeff_ref);
      write_matrix(c_out, term.coefficient.matrix);
      std::ofstream p_out(dir / proj_ref);
      write_matrix(p_out, term.projector.matrix);
    }
    line << " coeff=" << coeff_ref << " proj=" << proj_ref << " tower-residuals=";
    for (int s = 0; s < bundle.tower.size(); ++s) {
      if (s) line << ",";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3e",
                    (term.projector.matrix * bundle.tower.states[s].amplitudes).norm());
      line << buf;
    }
    report.kv("term", line.str());
  }

  auto lsplit = local_split(bundle.terms, bundle.target);
  Matrix leakage_sum = Matrix::Zero(bundle.space->dim(), bundle.space->dim());
  double recon = 0.0;
  std::vector<ManyBodyOperator> h_non;
  for (size_t k = 0; k < lsplit.records.size(); ++k) {
    const auto& rec = lsplit.records[k];
    recon = std::max(recon, (rec.off_target.matrix + rec.leakage.matrix +
                             rec.in_target.matrix - bundle.terms[k].first.matrix)
                                .cwiseAbs()
                                .maxCoeff());
    leakage_sum += rec.leakage.matrix;
    h_non.push_back(rec.weight_non_preserving);
  }
  report.check("local split reconstruction", recon <= 1e-12, recon, 1e-12);
  double leak = 0.0;
  for (const auto& s : bundle.tower.states)
    leak = std::max(leak, (leakage_sum * s.amplitudes).norm());
  report.check("leakage cancellation on tower", leak <= 1e-10, leak, 1e-10);

  report.merge_checks(q_selection_rule_check(bundle.terms, bundle.target, bundle.tower));
  if (bundle.target.dim() == 2)
    report.merge_checks(dm_constraint_check(h_non, bundle.target, bundle.tower));

  std::cout << report.render();
  return report.failed ? kExitCheckFailed : kExitPass;
}

int cmd_spectrum(const ModelOptions& opt, const std::string& out_path) {
  auto bundle = build_bundle(opt);
  Report report;
  report.command = "spectrum";
  report.kv("model", bundle.summary);
  report.kv("dim", bundle.space->dim());
  auto res = eigh(bundle.hamiltonian);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  for (long k = 0; k < res.eigenvalues.size(); ++k)
    out << format_double(res.eigenvalues(k)) << "\n";
  report.kv("file", out_path);
  report.kv("rows", static_cast<long>(res.eigenvalues.size()));
  report.kv("min energy", res.eigenvalues.minCoeff());
  report.kv("max energy", res.eigenvalues.maxCoeff());
  std::cout << report.render();
  return kExitPass;
}

int cmd_entropy(const ModelOptions& opt, const std::string& out_path) {
  auto bundle = build_bundle(opt);
  Report report;
  report.command = "entropy";
  report.kv("model", bundle.summary);
  const int n = bundle.space->num_sites();
  std::set<int> half;
  for (int x = 0; x < n / 2; ++x) half.insert(x);
  report.kv("cut", "sites 1.." + std::to_string(n / 2));

  auto res = eigh(bundle.hamiltonian);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << "# label energy scar_entropy bulk_energy bulk_entropy\n";
  for (size_t k = 0; k < bundle.raw_states.size(); ++k) {
    const auto& s = bundle.raw_states[k];
    double e = inner(s, bundle.hamiltonian * s).real();
    double se = entanglement_entropy(s, half);
    // nearest-in-energy eigenstate that is not (mostly) the scar itself
    int best = -1;
    double best_de = 0.0;
    for (long q = 0; q < res.eigenvalues.size(); ++q) {
      double overlap = std::norm(res.eigenvectors.col(q).dot(s.amplitudes));
      if (overlap > 0.5) continue;
      double de = std::abs(res.eigenvalues(q) - e);
      if (best < 0 || de < best_de) {
        best = static_cast<int>(q);
        best_de = de;
      }
    }
    StateVector bulk{bundle.space, res.eigenvectors.col(best)};
    double sb = entanglement_entropy(bulk, half);
    out << bundle.raw_labels[k] << " " << format_double(e) << " " << format_double(se) << " "
        << format_double(res.eigenvalues(best)) << " " << format_double(sb) << "\n";
    std::ostringstream line;
    line << bundle.raw_labels[k] << " E=" << format_double(e)
         << " S=" << format_double(se) << " bulk_S=" << format_double(sb);
    report.kv("entropy", line.str());
  }
  report.kv("file", out_path);
  std::cout << report.render();
  return kExitPass;
}

int cmd_selftest() {
  Report report;
  report.command = "selftest";
  run_selftest(report);
  std::cout << report.render();
  return report.failed ? kExitCheckFailed : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scar-tower verification toolkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  ModelOptions verify_opt, decomp_opt, spectrum_opt, entropy_opt;
  std::string dump_dir, spectrum_out = "spectrum.dat", entropy_out = "entropy.dat";

  auto* verify = app.add_subcommand("verify-tower", "verify the scar tower of a model");
  add_model_options(verify, verify_opt);

  auto* decompose = app.add_subcommand("decompose", "certified annihilator decomposition");
  add_model_options(decompose, decomp_opt);
  decompose->add_option("--dump-dir", dump_dir, "directory for matrix dumps");

  auto* spectrum = app.add_subcommand("spectrum", "full spectrum dump");
  add_model_options(spectrum, spectrum_opt);
  spectrum->add_option("--out", spectrum_out, "output file");

  auto* entropy = app.add_subcommand("entropy", "tower vs bulk entanglement entropies");
  add_model_options(entropy, entropy_opt);
  entropy->add_option("--out", entropy_out, "output file");

  app.add_subcommand("selftest", "run the built-in invariant suite (N <= 4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("verify-tower")) return cmd_verify_tower(verify_opt);
    if (app.got_subcommand("decompose")) return cmd_decompose(decomp_opt, dump_dir);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(spectrum_opt, spectrum_out);
    if (app.got_subcommand("entropy")) return cmd_entropy(entropy_opt, entropy_out);
    if (app.got_subcommand("selftest")) return cmd_selftest();
  } catch (const InvarianceError& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const ParseError& e) {
    std::cout << "error: config " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cout << "error: config validation: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
