#ifndef MAXSYM_SUITES_HPP
#define MAXSYM_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maxsym/report.hpp"
#include "maxsym/sweep.hpp"

namespace maxsym::suites {

//! A named property sweep with its pinned threshold. Metrics are normalised
//! inside the kernel so the threshold is a dimensionless constant; a sample
//! passes when metric <= threshold.
struct CheckDef {
  std::string name;
  std::string suite;  // "core" or "recovery"
  double threshold = 0.0;
  std::size_t default_samples = 0;
  sweep::Kernel kernel;
};

const std::vector<CheckDef>& registry();
const CheckDef& find_check(const std::string& name);

//! Run one check; samples == 0 uses the check's default count.
ReportRow run_check(const CheckDef& def, std::size_t samples, std::uint64_t seed,
                    int jobs);

//! Run a suite ("core", "recovery" or "all").
Report run_suite(const std::string& suite, std::size_t samples, std::uint64_t seed,
                 int jobs);

//! Target-determinant family for the gauge demonstration. "constant" is
//! h = 1; "bump" is a compactly supported smooth plateau bump (the family
//! keeping supp(h-1) inside the chart box).
struct GaugeDemoOptions {
  std::string family = "bump";
  double amplitude = 0.5;
  double center1 = 0.0, center2 = 0.0, center3 = 0.0;
  double width = 0.3;
  double omega = 1.0;
};

//! Gauge-map demonstration: boundary fixed, det DPhi = h below the plateau
//! threshold, boundary symbols of the pulled-back pair agree while the
//! interior volume ratio tracks the prescribed bump.
Report run_gauge_demo(std::uint64_t seed, const GaugeDemoOptions& opts);

}  // namespace maxsym::suites

#endif
