#ifndef MAXSYM_SWEEP_HPP
#define MAXSYM_SWEEP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace maxsym::sweep {

//! One sample of a property sweep: the residual metric it produced and
//! whether it stayed under the check's threshold.
struct SampleResult {
  double metric = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  std::string note;
};

//! Kernel evaluated per sample; the seed is derived as seed0 + index so the
//! outcome is independent of scheduling.
using Kernel = std::function<SampleResult(std::size_t index, std::uint64_t seed)>;

//! Serial reference implementation, kept as the comparison baseline.
std::vector<SampleResult> run_serial(std::size_t n, std::uint64_t seed0,
                                     const Kernel& kernel);

//! OpenMP execution over samples; each sample writes only its own slot, so
//! the result vector is identical to the serial one for any job count.
std::vector<SampleResult> run_parallel(std::size_t n, std::uint64_t seed0,
                                       const Kernel& kernel, int jobs);

struct Aggregate {
  std::size_t samples = 0;
  std::size_t failures = 0;
  double worst_metric = 0.0;
  std::uint64_t first_fail_seed = 0;
  std::string first_fail_note;
  bool pass() const { return failures == 0; }
};

Aggregate aggregate(const std::vector<SampleResult>& results);

}  // namespace maxsym::sweep

#endif
