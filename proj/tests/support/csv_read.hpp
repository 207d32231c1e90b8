#ifndef PSI_TESTS_CSV_READ_HPP
#define PSI_TESTS_CSV_READ_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace psi_test {

struct CsvFile {
  std::string schema;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

inline CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvFile csv;
  std::string line;
  bool header_seen = false;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (first) {
        csv.schema = line;
      } else {
        auto eq = line.find('=');
        if (eq != std::string::npos)
          csv.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      first = false;
      continue;
    }
    first = false;
    if (!header_seen) {
      csv.header = split_csv_line(line);
      header_seen = true;
    } else {
      csv.rows.push_back(split_csv_line(line));
    }
  }
  return csv;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace psi_test

#endif
