// Compares the serial reference sweep driver against the OpenMP one on the
// heavier property kernels and checks that both produce identical results.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "maxsym/suites.hpp"
#include "maxsym/sweep.hpp"

namespace {

double time_run(const maxsym::suites::CheckDef& def, std::size_t n, int jobs,
                std::vector<maxsym::sweep::SampleResult>& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = jobs <= 1 ? maxsym::sweep::run_serial(n, 1, def.kernel)
                  : maxsym::sweep::run_parallel(n, 1, def.kernel, jobs);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool identical(const std::vector<maxsym::sweep::SampleResult>& a,
               const std::vector<maxsym::sweep::SampleResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].metric != b[i].metric || a[i].pass != b[i].pass) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t samples = 200;
  if (argc > 1) samples = std::strtoull(argv[1], nullptr, 10);
  // at least one oversubscribed column so the determinism contract is
  // exercised even on a single hardware thread
  const int hw = std::max(4, omp_get_max_threads());

  const std::vector<std::string> names = {"quadratic-identity-H", "route-agreement",
                                          "factorization", "tangential-roundtrip",
                                          "jet-kernel-H"};
  std::printf("%-24s %10s", "kernel", "serial[s]");
  for (int j = 2; j <= hw; j *= 2) std::printf("  omp%-2d[s] speedup", j);
  std::printf("\n");

  bool all_identical = true;
  for (const auto& name : names) {
    const auto& def = maxsym::suites::find_check(name);
    std::vector<maxsym::sweep::SampleResult> serial, parallel;
    const double t_serial = time_run(def, samples, 1, serial);
    std::printf("%-24s %10.3f", name.c_str(), t_serial);
    for (int j = 2; j <= hw; j *= 2) {
      const double t_par = time_run(def, samples, j, parallel);
      all_identical = all_identical && identical(serial, parallel);
      std::printf("  %8.3f %7.2fx", t_par, t_serial / t_par);
    }
    std::printf("\n");
  }
  std::printf("results identical across job counts: %s\n",
              all_identical ? "yes" : "NO");
  return all_identical ? 0 : 1;
}
