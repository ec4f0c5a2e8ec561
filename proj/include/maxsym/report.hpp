#ifndef MAXSYM_REPORT_HPP
#define MAXSYM_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace maxsym {

//! One residual line of a command report; pass = value <= threshold.
struct ReportRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t replay_seed = 0;  // nonzero when a failing sample is known
};

struct Report {
  std::string command;
  std::vector<ReportRow> rows;
  double seconds = 0.0;

  void add(const std::string& name, double value, double threshold,
           std::uint64_t replay_seed = 0);
  bool pass() const;
  std::string to_text() const;
  std::string to_json_string() const;
};

}  // namespace maxsym

#endif
