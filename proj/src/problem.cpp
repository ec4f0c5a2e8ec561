#include "maxsym/problem.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace maxsym {

using nlohmann::json;

Mat3 random_symmetric3(Rng& rng, double scale) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = scale * rng.sym();
  return m;
}

Mat3 random_spd3(Rng& rng) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.sym();
  return Mat3(m.transpose() * m + 0.1 * Mat3::Identity());
}

Mat2 random_spd2(Rng& rng) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = rng.sym();
  return Mat2(m.transpose() * m + 0.1 * Mat2::Identity());
}

std::string kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Isotropic: return "isotropic";
    case ProblemKind::Diagonal: return "diagonal";
    case ProblemKind::Generic: return "generic";
    case ProblemKind::NearDegenerate: return "near-degenerate";
  }
  return "generic";
}

ProblemKind kind_from_name(const std::string& name) {
  if (name == "isotropic") return ProblemKind::Isotropic;
  if (name == "diagonal") return ProblemKind::Diagonal;
  if (name == "generic") return ProblemKind::Generic;
  if (name == "near-degenerate") return ProblemKind::NearDegenerate;
  throw std::invalid_argument("unknown problem kind: " + name);
}

namespace {

Mat3 block_embed(const Mat2& t) {
  Mat3 m = Mat3::Zero();
  m.topLeftCorner<2, 2>() = t;
  m(2, 2) = 1.0;
  return m;
}

//! jets for a metric kept in boundary normal form: blockdiag(2x2, 0)
//! derivative matrices so the normal components stay pinned.
void fill_bnc_jets(MetricJet& jet, Rng& rng, int jet_order, bool diagonal) {
  auto block2 = [&](double scale) {
    Mat2 t;
    const double a = scale * rng.sym();
    const double b = diagonal ? 0.0 : scale * rng.sym();
    const double c = scale * rng.sym();
    t << a, b, b, c;
    Mat3 m = Mat3::Zero();
    m.topLeftCorner<2, 2>() = t;
    return m;
  };
  for (int a = 0; a < 3; ++a) jet.d1[a] = block2(0.3);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) jet.d2_at(a, b) = block2(0.09);
  for (int k = 3; k <= jet_order; ++k) jet.dn_hi.push_back(block2(std::pow(0.3, k)));
}

void fill_full_jets(MetricJet& jet, Rng& rng, int jet_order, bool diagonal) {
  auto sym = [&](double scale) {
    Mat3 m = random_symmetric3(rng, scale);
    if (diagonal) m = Mat3(m.diagonal().asDiagonal());
    return m;
  };
  for (int a = 0; a < 3; ++a) jet.d1[a] = sym(0.3);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) jet.d2_at(a, b) = sym(0.09);
  for (int k = 3; k <= jet_order; ++k) jet.dn_hi.push_back(sym(std::pow(0.3, k)));
}

}  // namespace

ProblemInstance make_instance(std::uint64_t seed, ProblemKind kind, int jet_order) {
  ProblemInstance p;
  p.seed = seed;
  p.kind = kind;
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  switch (kind) {
    case ProblemKind::Isotropic:
      p.eps_jet = MetricJet::constant(Metric3::identity());
      p.mu_jet = MetricJet::constant(Metric3::identity());
      break;
    case ProblemKind::Diagonal: {
      Mat2 t = random_spd2(rng);
      t(0, 1) = t(1, 0) = 0.0;
      p.eps_jet.value = Metric3(block_embed(t));
      fill_bnc_jets(p.eps_jet, rng, jet_order, true);
      Mat3 m = random_spd3(rng);
      p.mu_jet.value = Metric3(Mat3(m.diagonal().asDiagonal()));
      fill_full_jets(p.mu_jet, rng, jet_order, true);
      break;
    }
    case ProblemKind::Generic: {
      p.eps_jet.value = Metric3(block_embed(random_spd2(rng)));
      fill_bnc_jets(p.eps_jet, rng, jet_order, false);
      p.mu_jet.value = Metric3(random_spd3(rng));
      fill_full_jets(p.mu_jet, rng, jet_order, false);
      break;
    }
    case ProblemKind::NearDegenerate: {
      const Mat2 t = random_spd2(rng);
      p.eps_jet.value = Metric3(block_embed(t));
      fill_bnc_jets(p.eps_jet, rng, jet_order, false);
      const double conf = 0.5 + rng.uniform();
      const Mat3 wobble = random_symmetric3(rng, 1e-6);
      p.mu_jet.value = Metric3(Mat3(conf * p.eps_jet.value.mat() + wobble));
      fill_full_jets(p.mu_jet, rng, jet_order, false);
      break;
    }
  }
  return p;
}

namespace {

json sym3_to_json(const Mat3& m) {
  return json::array({m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)});
}

Mat3 sym3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 6)
    throw std::invalid_argument("symmetric matrix needs 6 upper-triangle entries");
  Mat3 m;
  m(0, 0) = j[0];
  m(0, 1) = m(1, 0) = j[1];
  m(0, 2) = m(2, 0) = j[2];
  m(1, 1) = j[3];
  m(1, 2) = m(2, 1) = j[4];
  m(2, 2) = j[5];
  return m;
}

json jet_to_json(const MetricJet& jet) {
  json j;
  j["value"] = sym3_to_json(jet.value.mat());
  j["d1"] = json::array();
  for (const auto& m : jet.d1) j["d1"].push_back(sym3_to_json(m));
  j["d2"] = json::array();
  for (const auto& m : jet.d2) j["d2"].push_back(sym3_to_json(m));
  j["dn_hi"] = json::array();
  for (const auto& m : jet.dn_hi) j["dn_hi"].push_back(sym3_to_json(m));
  return j;
}

MetricJet jet_from_json(const json& j) {
  MetricJet jet;
  jet.value = Metric3(sym3_from_json(j.at("value")));
  if (j.contains("d1")) {
    if (j["d1"].size() != 3) throw std::invalid_argument("d1 needs 3 matrices");
    for (int a = 0; a < 3; ++a) jet.d1[a] = sym3_from_json(j["d1"][a]);
  }
  if (j.contains("d2")) {
    if (j["d2"].size() != 6) throw std::invalid_argument("d2 needs 6 matrices");
    for (int i = 0; i < 6; ++i) jet.d2[i] = sym3_from_json(j["d2"][i]);
  }
  if (j.contains("dn_hi"))
    for (const auto& m : j["dn_hi"]) jet.dn_hi.push_back(sym3_from_json(m));
  jet.validate();
  return jet;
}

}  // namespace

std::string to_json_string(const ProblemInstance& p) {
  json j;
  j["version"] = p.version;
  j["omega"] = p.omega;
  j["chart"] = "eps-bnc";
  j["seed"] = p.seed;
  j["kind"] = kind_name(p.kind);
  j["eps_hat_jet"] = jet_to_json(p.eps_jet);
  j["mu_hat_jet"] = jet_to_json(p.mu_jet);
  return j.dump(2) + "\n";
}

ProblemInstance problem_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ProblemInstance p;
  p.version = j.at("version").get<std::string>();
  if (p.version != "1") throw std::invalid_argument("unrecognised problem version");
  p.omega = j.at("omega").get<double>();
  if (p.omega <= 0.0) throw std::invalid_argument("omega must be positive");
  p.seed = j.value("seed", 0ull);
  p.kind = kind_from_name(j.value("kind", "generic"));
  p.eps_jet = jet_from_json(j.at("eps_hat_jet"));
  p.mu_jet = jet_from_json(j.at("mu_hat_jet"));
  return p;
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return problem_from_json_string(ss.str());
}

void save_problem(const ProblemInstance& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json_string(p);
}

// The (1,1)-tensors eps, mu are not symmetric matrices; the file stores the
// lowered forms g.eps and g.mu, which symmetry-with-respect-to-g makes
// symmetric positive definite.
std::string triple_to_json_string(const ParameterTriple& t) {
  json j;
  j["version"] = "1";
  j["omega"] = t.omega;
  j["epsilon_flat"] = sym3_to_json(Mat3(t.g.mat() * t.epsilon));
  j["mu_flat"] = sym3_to_json(Mat3(t.g.mat() * t.mu));
  j["g"] = sym3_to_json(t.g.mat());
  return j.dump(2) + "\n";
}

ParameterTriple triple_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ParameterTriple t;
  t.omega = j.value("omega", 1.0);
  t.g = Metric3(sym3_from_json(j.at("g")));
  t.epsilon = t.g.inverse().mat() * sym3_from_json(j.at("epsilon_flat"));
  t.mu = t.g.inverse().mat() * sym3_from_json(j.at("mu_flat"));
  validate_triple(t);
  return t;
}

ParameterTriple load_triple(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return triple_from_json_string(ss.str());
}

std::string hat_pair_to_json_string(const HatPair& hp) {
  json j;
  j["eps_hat"] = sym3_to_json(hp.eps_hat.mat());
  j["mu_hat"] = sym3_to_json(hp.mu_hat.mat());
  return j.dump(2) + "\n";
}

namespace {

json covector_to_json_pairs(const Covector3& v) {
  json j = json::array();
  for (int i = 0; i < 3; ++i) j.push_back(json::array({v(i).real(), v(i).imag()}));
  return j;
}

Covector3 covector_from_json_pairs(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("covector needs 3 [re, im] pairs");
  Covector3 v;
  for (int i = 0; i < 3; ++i) v(i) = cplx(j[i].at(0), j[i].at(1));
  return v;
}

json table_to_json(const SymbolTable& t) {
  json j;
  j["directions"] = json::array();
  j["values"] = json::array();
  for (const auto& d : t.directions) j["directions"].push_back({d(0), d(1)});
  for (const auto& v : t.values) j["values"].push_back(covector_to_json_pairs(v));
  return j;
}

SymbolTable table_from_json(const json& j, double omega) {
  SymbolTable t;
  t.omega = omega;
  for (const auto& d : j.at("directions"))
    t.directions.emplace_back(d.at(0), d.at(1));
  for (const auto& v : j.at("values")) t.values.push_back(covector_from_json_pairs(v));
  if (t.directions.size() != t.values.size() || t.directions.empty())
    throw std::invalid_argument("sample table needs matching directions and values");
  return t;
}

}  // namespace

bool looks_like_sample_file(const std::string& text) {
  const json j = json::parse(text);
  return j.contains("impedance_samples") || j.contains("admittance_samples");
}

SymbolSampleFile samples_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  SymbolSampleFile f;
  f.omega = j.value("omega", 1.0);
  if (f.omega <= 0.0) throw std::invalid_argument("omega must be positive");
  if (j.contains("impedance_samples")) {
    f.has_impedance = true;
    f.impedance = table_from_json(j["impedance_samples"], f.omega);
  }
  if (j.contains("admittance_samples")) {
    f.has_admittance = true;
    f.admittance = table_from_json(j["admittance_samples"], f.omega);
  }
  if (!f.has_impedance && !f.has_admittance)
    throw std::invalid_argument("sample file carries no tables");
  return f;
}

std::string samples_to_json_string(const SymbolSampleFile& f) {
  json j;
  j["version"] = "1";
  j["omega"] = f.omega;
  if (f.has_impedance) j["impedance_samples"] = table_to_json(f.impedance);
  if (f.has_admittance) j["admittance_samples"] = table_to_json(f.admittance);
  return j.dump(2) + "\n";
}

ProblemInstance instance_from_triple(const ParameterTriple& t) {
  const HatPair hp = build_hat_pair(t);
  const BoundaryChart chart = to_boundary_normal(hp.eps_hat, hp.mu_hat);
  ProblemInstance p;
  p.omega = t.omega;
  Mat3 eps_bnc = Mat3::Zero();
  eps_bnc.topLeftCorner<2, 2>() = chart.eps_tilde;
  eps_bnc(2, 2) = 1.0;
  p.eps_jet = MetricJet::constant(Metric3(eps_bnc));
  p.mu_jet = MetricJet::constant(chart.companion_bnc);
  return p;
}

}  // namespace maxsym
