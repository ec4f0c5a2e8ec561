#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "maxsym/boundary.hpp"
#include "maxsym/geometry.hpp"
#include "maxsym/problem.hpp"
#include "maxsym/recovery.hpp"
#include "maxsym/report.hpp"
#include "maxsym/suites.hpp"
#include "maxsym/symbols.hpp"

namespace {

using namespace maxsym;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;   // mathematical failure or inconsistency
constexpr int kExitInput = 2;  // malformed input

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json covector_to_json(const Covector3& v) {
  json j = json::array();
  for (int i = 0; i < 3; ++i) j.push_back(complex_to_json(v(i)));
  return j;
}

json cmat_to_json(const Mat3c& m) {
  json j = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int k = 0; k < 3; ++k) row.push_back(complex_to_json(m(i, k)));
    j.push_back(row);
  }
  return j;
}

json mat2_to_json(const Mat2& m) {
  return json::array({m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MAXSYM_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

int cmd_gen(const std::string& out_path, std::uint64_t seed, const std::string& kind,
            int jet_order, const std::string& triple_path, const std::string& hat_out) {
  ProblemInstance inst;
  if (triple_path.empty()) {
    inst = make_instance(seed, kind_from_name(kind), jet_order);
  } else {
    const ParameterTriple triple = load_triple(triple_path);
    inst = instance_from_triple(triple);
    if (!hat_out.empty())
      write_output(hat_out, hat_pair_to_json_string(build_hat_pair(triple)));
  }
  const std::string text = to_json_string(inst);
  if (out_path.empty())
    std::cout << text;
  else
    write_output(out_path, text);
  return kExitPass;
}

int cmd_symbols(const std::string& in_path, int directions, const std::string& out_path) {
  const ProblemInstance inst = load_problem(in_path);
  const SymbolSet sh = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const SymbolSet se = coefficient_symbols(inst.mu_jet, inst.eps_jet, inst.omega);

  Report rep;
  rep.command = "symbols " + in_path;
  const auto t0 = std::chrono::steady_clock::now();
  json record;
  record["omega"] = inst.omega;
  record["T_H"] = cmat_to_json(sh.T());
  record["G_H"] = cmat_to_json(sh.G());
  record["R_H"] = cmat_to_json(sh.R());
  record["T_E"] = cmat_to_json(se.T());
  record["directions"] = json::array();

  double worst_quad = 0.0, worst_route = 0.0;
  bool degenerate_seen = false;
  for (int k = 0; k < directions; ++k) {
    const double th = 2.0 * 3.14159265358979323846 * k / directions;
    const TangentialCovector xi(std::cos(th), std::sin(th));
    json dir;
    dir["xi"] = json::array({xi(0), xi(1)});
    dir["A_H"] = cmat_to_json(sh.A(xi));
    dir["Q_H"] = cmat_to_json(sh.Q(xi));
    dir["F_H"] = cmat_to_json(sh.F(xi));
    const auto [xe, xm] = eigenvalues(sh.eps_metric(), sh.mu_metric(), xi);
    dir["xi_eps3"] = complex_to_json(xe);
    dir["xi_mu3"] = complex_to_json(xm);

    Mat3c b;
    try {
      const JordanData jd = jordan_data(sh.eps_metric(), sh.mu_metric(), xi);
      b = principal_B_jordan(jd);
      dir["route"] = "jordan";
      dir["m_coeff"] = complex_to_json(jd.m_coeff);
      dir["chi"] = covector_to_json(jd.chi);
      dir["xi_mu_vec"] = covector_to_json(jd.xi_mu);
      dir["gamma"] = covector_to_json(jd.gamma);
      const Mat3c bc = principal_B_contour(sh, xi);
      worst_route = std::max(worst_route, (b - bc).norm() / b.norm());
    } catch (const degenerate_error&) {
      degenerate_seen = true;
      b = principal_B_contour(sh, xi);
      dir["route"] = "contour";
    } catch (const near_degenerate_error&) {
      degenerate_seen = true;
      b = principal_B_contour(sh, xi);
      dir["route"] = "contour";
    }
    dir["B1"] = cmat_to_json(b);
    const Mat3c c = principal_B(se, xi);
    dir["C1"] = cmat_to_json(c);
    const Mat3c qh = sh.Q(xi);
    worst_quad = std::max(worst_quad,
                          (sh.T() * b * b + sh.A(xi) * b + qh).norm() / qh.norm());
    const Mat3c qe = se.Q(xi);
    worst_quad = std::max(worst_quad,
                          (se.T() * c * c + se.A(xi) * c + qe).norm() / qe.norm());

    const Covector3 f(1.0, 1.0, 0.0);
    dir["lambda_eps"] =
        covector_to_json(impedance_principal(sh.eps_metric(), xi, f, inst.omega));
    dir["lambda_mu"] =
        covector_to_json(admittance_principal(sh.mu_metric(), xi, f, inst.omega));
    record["directions"].push_back(dir);
  }
  rep.add("quadratic-identity", worst_quad, 1e-10);
  if (!degenerate_seen) rep.add("route-agreement", worst_route, 1e-8);
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  record["report"] = json::parse(rep.to_json_string());

  std::cout << rep.to_text();
  if (degenerate_seen)
    std::cout << "note: degenerate directions handled by the contour route\n";
  if (!out_path.empty()) write_output(out_path, record.dump(2) + "\n");
  return rep.pass() ? kExitPass : kExitFail;
}

int cmd_boundary_symbol(const std::string& in_path, int directions,
                        const std::string& out_path) {
  const ProblemInstance inst = load_problem(in_path);
  const Metric3 eps = inst.eps_jet.value;
  const Metric3 mu = inst.mu_jet.value;
  json record;
  record["directions"] = json::array();
  const Covector3 f(1.0, -0.5, 0.25);
  for (int k = 0; k < directions; ++k) {
    const double th = 2.0 * 3.14159265358979323846 * k / directions;
    const TangentialCovector xi(std::cos(th), std::sin(th));
    json dir;
    dir["xi"] = json::array({xi(0), xi(1)});
    dir["lambda_eps"] = covector_to_json(impedance_principal(eps, xi, f, inst.omega));
    dir["lambda_mu"] = covector_to_json(admittance_principal(mu, xi, f, inst.omega));
    try {
      dir["H0"] = covector_to_json(field_symbol_H(eps, mu, xi, f).value);
      dir["E3"] = complex_to_json(normal_E_symbol(eps, mu, xi, f));
    } catch (const degenerate_error&) {
      dir["H0"] = "degenerate";
    }
    record["directions"].push_back(dir);
  }
  const std::string text = record.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_output(out_path, text);
  return kExitPass;
}

SymbolSampler add_noise(const SymbolSampler& clean, double amplitude,
                        std::uint64_t seed) {
  auto noisy = [clean, amplitude, seed](const TangentialCovector& xi) {
    Covector3 v = clean.lambda_rot(xi);
    Rng rng(seed ^ static_cast<std::uint64_t>(1e6 * (xi(0) + 3.0) * (xi(1) + 7.0)));
    for (int i = 0; i < 3; ++i)
      v(i) *= 1.0 + amplitude * cplx(rng.sym(), rng.sym());
    return v;
  };
  return SymbolSampler{noisy, clean.omega};
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

//! recovery from tabulated symbol observations; only tangential data can be
//! read off a sample table
int cmd_recover_samples(const std::string& text, const std::string& mode,
                        const std::string& out_path) {
  if (mode != "tangential") {
    std::cerr << "sample tables support --mode tangential only\n";
    return kExitInput;
  }
  const SymbolSampleFile file = samples_from_json_string(text);
  Report rep;
  rep.command = "recover --mode tangential (tabulated samples)";
  const auto t0 = std::chrono::steady_clock::now();
  json record;
  try {
    if (file.has_impedance) {
      const Mat2 rec = recover_tangential(table_sampler(file.impedance));
      record["eps_tilde"] = mat2_to_json(rec);
      rep.add("eps-tilde-spd", is_spd2(rec) ? 0.0 : 1.0, 0.0);
    }
    if (file.has_admittance) {
      const Mat2 rec = recover_tangential_mu(table_sampler(file.admittance));
      record["mu_tilde"] = mat2_to_json(rec);
      rep.add("mu-tilde-spd", is_spd2(rec) ? 0.0 : 1.0, 0.0);
    }
  } catch (const inconsistent_data& e) {
    rep.add(std::string("samples-consistency: ") + e.what(), 1.0, 0.0);
    record["verdict"] = "Inconsistent";
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << rep.to_text();
  record["report"] = json::parse(rep.to_json_string());
  if (!out_path.empty()) write_output(out_path, record.dump(2) + "\n");
  return rep.pass() ? kExitPass : kExitFail;
}

int cmd_recover(const std::string& in_path, const std::string& mode, int kappa,
                double noise, const std::string& out_path) {
  const std::string text = slurp_file(in_path);
  if (looks_like_sample_file(text)) return cmd_recover_samples(text, mode, out_path);
  const ProblemInstance inst = problem_from_json_string(text);
  const Metric3 eps = inst.eps_jet.value;
  const Metric3 mu = inst.mu_jet.value;
  Report rep;
  rep.command = "recover --mode " + mode;
  const auto t0 = std::chrono::steady_clock::now();
  json record;

  if (mode == "tangential") {
    const Mat2 eps_t = tangential_block(eps);
    const Mat2 mu_t = tangential_block(mu);
    const Mat2 rec_eps = recover_tangential(forward_impedance_sampler(eps, inst.omega));
    const Mat2 rec_mu = recover_tangential_mu(forward_admittance_sampler(mu, inst.omega));
    rep.add("eps-tilde-roundtrip", (rec_eps - eps_t).norm() / eps_t.norm(), 1e-10);
    rep.add("mu-tilde-roundtrip", (rec_mu - mu_t).norm() / mu_t.norm(), 1e-10);
    record["eps_tilde"] = mat2_to_json(rec_eps);
    record["mu_tilde"] = mat2_to_json(rec_mu);
    if (noise > 0.0) {
      // synthetic robustness report; not part of the pass/fail table
      try {
        const Mat2 noisy = recover_tangential(
            add_noise(forward_impedance_sampler(eps, inst.omega), noise, inst.seed));
        record["noise"] = {{"amplitude", noise},
                           {"eps_tilde_error", (noisy - eps_t).norm() / eps_t.norm()}};
      } catch (const inconsistent_data& e) {
        record["noise"] = {{"amplitude", noise}, {"rejected", e.what()}};
      }
    }
  } else if (mode == "normal") {
    const Mat2 eps_t = tangential_block(eps);
    const Mat2 mu_t = tangential_block(mu);
    NormalComponents nc{Vec2(mu(0, 2), mu(1, 2)), mu(2, 2)};
    const auto grid = direction_grid(16);
    const NormalMuReport self = recover_normal_mu(eps_t, mu_t, nc, nc, grid);
    rep.add("self-consistency-residual", self.max_residual, 1e-11);
    const MultiplesResult mr = multiples_test(eps_t, mu_t, 1e-9);
    record["tangential_multiples"] = mr.multiple;
    if (mr.multiple) record["multiple_factor"] = mr.factor;
    record["verdict"] = self.verdict == NormalVerdict::Equal ? "Equal" : "other";
  } else if (mode == "jets") {
    if (kappa < 1 || kappa > 3) {
      std::cerr << "kappa must be 1, 2 or 3\n";
      return kExitInput;
    }
    const auto grid = direction_grid(16);
    const Eigen::MatrixXd hmap = jet_residual_H_map(eps, mu, grid, kappa);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_h(hmap);
    const double smin_h = svd_h.singularValues().tail(1)(0);
    const double smax_h = svd_h.singularValues()(0);
    rep.add("jet-H-kernel-trivial", 1e-6 * smax_h / smin_h, 1.0);
    const JetResidualE emaps = jet_residual_E_map(eps, mu, grid, kappa);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_e(emaps.stage1);
    rep.add("jet-E-stage1-kernel-trivial",
            1e-6 * svd_e.singularValues()(0) / svd_e.singularValues().tail(1)(0), 1.0);
    rep.add("jet-E-stage2-coefficient",
            1e-8 * std::max(1.0, emaps.stage2.cwiseAbs().maxCoeff()) / emaps.coeff_min,
            1.0);
    record["kappa"] = kappa;
    record["h_kernel_dimension"] = smin_h > 1e-6 * smax_h ? 0 : 1;
    // Sylvester uniqueness certificate at a reference direction
    const SymbolSet sh = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
    const TangentialCovector xi(1.0, 0.0);
    const Mat3c b = principal_B(sh, xi);
    const double syl_min = sylvester_min_singular_value(sh, xi, b);
    const double syl_max = sylvester_max_singular_value(sh, xi, b);
    rep.add("sylvester-positivity", 1e-10 * syl_max / syl_min, 1.0);
    record["sylvester_min_singular_value"] = syl_min;
  } else {
    std::cerr << "unknown mode: " << mode << "\n";
    return kExitInput;
  }

  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << rep.to_text();
  record["report"] = json::parse(rep.to_json_string());
  if (!out_path.empty()) write_output(out_path, record.dump(2) + "\n");
  return rep.pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbol calculus and boundary recovery for anisotropic time-harmonic "
               "Maxwell systems"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a deterministic problem file");
  std::uint64_t seed = default_seed();
  std::string kind = "generic", out_path, in_path, triple_path, hat_out;
  int jet_order = 3;
  gen->add_option("--seed", seed, "generation seed");
  gen->add_option("--kind", kind, "isotropic|diagonal|generic|near-degenerate");
  gen->add_option("--jet-order", jet_order, "highest normal-derivative order");
  gen->add_option("--from-triple", triple_path,
                  "build the problem from a material-parameter file instead");
  gen->add_option("--hat-out", hat_out, "also write the induced hat pair");
  gen->add_option("--out,-o", out_path, "output file (stdout when absent)");

  // symbols
  auto* symbols = app.add_subcommand("symbols", "emit coefficient symbols, "
                                                "eigenstructure and factorisation");
  int directions = 16;
  symbols->add_option("--in,-i", in_path, "problem file")->required();
  symbols->add_option("--directions", directions, "xi~ grid size");
  symbols->add_option("--out,-o", out_path, "JSON record output");

  // boundary-symbol
  auto* bsym = app.add_subcommand("boundary-symbol",
                                  "emit impedance/admittance symbols on a grid");
  bsym->add_option("--in,-i", in_path, "problem file")->required();
  bsym->add_option("--directions", directions, "xi~ grid size");
  bsym->add_option("--out,-o", out_path, "JSON record output");

  // recover
  auto* recover = app.add_subcommand("recover", "run a recovery mode");
  std::string mode = "tangential";
  int kappa = 1;
  double noise = 0.0;
  recover->add_option("--in,-i", in_path, "problem file")->required();
  recover->add_option("--mode", mode, "tangential|normal|jets");
  recover->add_option("--kappa", kappa, "jet order for --mode jets");
  recover->add_option("--noise", noise,
                      "relative sample noise for robustness reporting "
                      "(informational; acceptance rows stay on exact data)");
  recover->add_option("--out,-o", out_path, "JSON report output");

  // gauge-demo
  auto* gauge = app.add_subcommand("gauge-demo", "boundary-fixing diffeomorphism "
                                                 "non-uniqueness demonstration");
  maxsym::suites::GaugeDemoOptions gopts;
  gauge->add_option("--seed", seed, "seed");
  gauge->add_option("--family", gopts.family,
                    "target-determinant family: constant|bump (the compactly "
                    "supported smooth bump; gaussian-bump accepted as alias)");
  gauge->add_option("--amplitude", gopts.amplitude, "bump amplitude of the target h");
  gauge->add_option("--center1", gopts.center1, "tangential bump centre");
  gauge->add_option("--center2", gopts.center2, "tangential bump centre");
  gauge->add_option("--width", gopts.width, "normal width of the bump");
  gauge->add_option("--omega", gopts.omega, "angular frequency");
  gauge->add_option("--out,-o", out_path, "JSON report output");

  // verify
  auto* verify = app.add_subcommand("verify", "run the property-verification suites");
  std::string suite = "all";
  std::size_t samples = 0;
  int jobs = 1;
  verify->add_option("--suite", suite, "all|core|recovery");
  verify->add_option("--samples", samples, "samples per check (0 = defaults)");
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--jobs", jobs, "worker threads");
  verify->add_option("--out,-o", out_path, "JSON report output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(out_path, seed, kind, jet_order, triple_path, hat_out);
    if (symbols->parsed()) return cmd_symbols(in_path, directions, out_path);
    if (bsym->parsed()) return cmd_boundary_symbol(in_path, directions, out_path);
    if (recover->parsed()) return cmd_recover(in_path, mode, kappa, noise, out_path);
    if (gauge->parsed()) {
      if (gopts.family == "gaussian-bump") gopts.family = "bump";
      if (gopts.family != "bump" && gopts.family != "constant") {
        std::cerr << "unknown family: " << gopts.family << "\n";
        return kExitInput;
      }
      const maxsym::Report rep = maxsym::suites::run_gauge_demo(seed, gopts);
      std::cout << rep.to_text();
      if (!out_path.empty()) write_output(out_path, rep.to_json_string());
      return rep.pass() ? kExitPass : kExitFail;
    }
    if (verify->parsed()) {
      if (suite != "all" && suite != "core" && suite != "recovery") {
        std::cerr << "unknown suite: " << suite << "\n";
        return kExitInput;
      }
      const maxsym::Report rep = maxsym::suites::run_suite(suite, samples, seed, jobs);
      std::cout << rep.to_text();
      if (!out_path.empty()) write_output(out_path, rep.to_json_string());
      return rep.pass() ? kExitPass : kExitFail;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const maxsym::inconsistent_data& e) {
    std::cerr << "inconsistent data: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInput;
}
