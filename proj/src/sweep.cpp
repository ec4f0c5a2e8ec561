#include "maxsym/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

namespace maxsym::sweep {

namespace {

// exceptions must not escape an OpenMP region; a throwing sample becomes a
// failed result carrying its seed and message
SampleResult guarded(const Kernel& kernel, std::size_t i, std::uint64_t seed) {
  try {
    return kernel(i, seed);
  } catch (const std::exception& e) {
    SampleResult r;
    r.metric = std::numeric_limits<double>::infinity();
    r.pass = false;
    r.seed = seed;
    r.note = e.what();
    return r;
  }
}

}  // namespace

std::vector<SampleResult> run_serial(std::size_t n, std::uint64_t seed0,
                                     const Kernel& kernel) {
  std::vector<SampleResult> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = guarded(kernel, i, seed0 + i);
  return out;
}

std::vector<SampleResult> run_parallel(std::size_t n, std::uint64_t seed0,
                                       const Kernel& kernel, int jobs) {
  if (jobs <= 1) return run_serial(n, seed0, kernel);
  std::vector<SampleResult> out(n);
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(jobs)
  for (long long i = 0; i < nn; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    out[idx] = guarded(kernel, idx, seed0 + idx);
  }
  return out;
}

Aggregate aggregate(const std::vector<SampleResult>& results) {
  Aggregate agg;
  agg.samples = results.size();
  bool first = true;
  for (const auto& r : results) {
    agg.worst_metric = std::max(agg.worst_metric, r.metric);
    if (!r.pass) {
      ++agg.failures;
      if (first) {
        agg.first_fail_seed = r.seed;
        agg.first_fail_note = r.note;
        first = false;
      }
    }
  }
  return agg;
}

}  // namespace maxsym::sweep
