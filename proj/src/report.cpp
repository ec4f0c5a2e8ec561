#include "maxsym/report.hpp"

#include <algorithm>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace maxsym {

void Report::add(const std::string& name, double value, double threshold,
                 std::uint64_t replay_seed) {
  rows.push_back(ReportRow{name, value, threshold, value <= threshold, replay_seed});
}

bool Report::pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ReportRow& r) { return r.pass; });
}

std::string Report::to_text() const {
  std::size_t width = 24;
  for (const auto& r : rows) width = std::max(width, r.name.size() + 2);
  std::ostringstream os;
  os << "# " << command << "\n";
  os << std::left << std::setw(static_cast<int>(width)) << "check"
     << std::setw(14) << "value" << std::setw(14) << "threshold"
     << "status\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(width)) << r.name
       << std::setw(14) << std::scientific << std::setprecision(3) << r.value
       << std::setw(14) << r.threshold << (r.pass ? "pass" : "FAIL");
    if (!r.pass && r.replay_seed != 0) os << "  replay-seed=" << r.replay_seed;
    os << "\n";
  }
  os << (pass() ? "all checks passed" : "FAILURES present") << " ("
     << std::fixed << std::setprecision(2) << seconds << " s)\n";
  return os.str();
}

std::string Report::to_json_string() const {
  nlohmann::json j;
  j["command"] = command;
  j["seconds"] = seconds;
  j["pass"] = pass();
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["name"] = r.name;
    row["value"] = r.value;
    row["threshold"] = r.threshold;
    row["pass"] = r.pass;
    if (r.replay_seed != 0) row["replay_seed"] = r.replay_seed;
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

}  // namespace maxsym
