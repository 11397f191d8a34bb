#include "pg/runio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pg {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_run_csv(const std::filesystem::path& path,
                   const std::vector<IterationRecord>& records) {
  std::ofstream out(path, std::ios::binary);  // \n endings regardless of platform
  if (!out) throw std::runtime_error("write_run_csv: cannot open " + path.string());
  out << kRunCsvHeader << '\n';
  for (const IterationRecord& r : records) {
    out << r.t << ',' << r.system_probes << ',' << format_g17(r.mean_return) << ','
        << format_g17(r.discounted_return) << ',' << format_g17(r.step_len) << ','
        << format_g17(r.dir_norm) << ',' << format_g17(r.grad_norm_est) << '\n';
  }
  if (!out) throw std::runtime_error("write_run_csv: write failed for " + path.string());
}

std::vector<IterationRecord> read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_run_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunCsvHeader)
    throw std::runtime_error("read_run_csv: bad header in " + path.string());
  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    IterationRecord r;
    char comma;
    ss >> r.t >> comma >> r.system_probes >> comma >> r.mean_return >> comma >>
        r.discounted_return >> comma >> r.step_len >> comma >> r.dir_norm >> comma >>
        r.grad_norm_est;
    if (!ss) throw std::runtime_error("read_run_csv: bad row in " + path.string());
    records.push_back(r);
  }
  return records;
}

std::string run_file_stem(const std::string& algorithm, const std::string& gamma0_label,
                          std::uint64_t seed) {
  return algorithm + "__g" + gamma0_label + "__s" + std::to_string(seed);
}

}  // namespace pg
