#ifndef MAXSYM_PROBLEM_HPP
#define MAXSYM_PROBLEM_HPP

#include <cstdint>
#include <random>
#include <string>

#include "maxsym/geometry.hpp"
#include "maxsym/recovery.hpp"
#include "maxsym/symbols.hpp"

namespace maxsym {

//! Deterministic RNG with platform-independent uniform draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  //! uniform in [-1, 1)
  double sym() { return uniform() * 2.0 - 1.0; }
  //! uniform in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

Mat3 random_symmetric3(Rng& rng, double scale);
Mat2 random_spd2(Rng& rng);
Mat3 random_spd3(Rng& rng);

enum class ProblemKind { Isotropic, Diagonal, Generic, NearDegenerate };

std::string kind_name(ProblemKind k);
ProblemKind kind_from_name(const std::string& name);

//! A desk-scale instance: eps_hat jets in their boundary normal form
//! (blockdiag at every jet order), mu_hat jets general SPD.
struct ProblemInstance {
  std::string version = "1";
  double omega = 1.0;
  std::uint64_t seed = 0;
  ProblemKind kind = ProblemKind::Generic;
  MetricJet eps_jet;
  MetricJet mu_jet;
};

//! Deterministic instance from a seed; jets scaled 0.3^k per order.
ProblemInstance make_instance(std::uint64_t seed, ProblemKind kind, int jet_order = 3);

std::string to_json_string(const ProblemInstance& p);
ProblemInstance problem_from_json_string(const std::string& text);
ProblemInstance load_problem(const std::string& path);
void save_problem(const ProblemInstance& p, const std::string& path);

//! Material-parameter file: symmetric matrices as 6-entry upper triangles.
std::string triple_to_json_string(const ParameterTriple& t);
ParameterTriple triple_from_json_string(const std::string& text);
ParameterTriple load_triple(const std::string& path);
std::string hat_pair_to_json_string(const HatPair& hp);

//! Constant-jet problem built from a material triple: the hat pair reduced
//! to eps-boundary-normal form at the point.
ProblemInstance instance_from_triple(const ParameterTriple& t);

//! Tabulated boundary-symbol observations as an alternative recovery input.
struct SymbolSampleFile {
  double omega = 1.0;
  bool has_impedance = false;
  bool has_admittance = false;
  SymbolTable impedance;
  SymbolTable admittance;
};

bool looks_like_sample_file(const std::string& text);
SymbolSampleFile samples_from_json_string(const std::string& text);
std::string samples_to_json_string(const SymbolSampleFile& f);

}  // namespace maxsym

#endif
