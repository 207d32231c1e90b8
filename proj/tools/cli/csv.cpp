#include "cli/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace psi_cli {

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)), tmp_path_(path_ + ".tmp") {
  buffer_ += "# psi-csv v1\n";
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

std::string CsvWriter::format(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void CsvWriter::metadata(const std::string& key, const std::string& value) {
  buffer_ += "# " + key + "=" + value + "\n";
}

void CsvWriter::metadata(const std::string& key, double value) {
  metadata(key, format(value));
}

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::cell(std::string text) { pending_.push_back(std::move(text)); }
void CsvWriter::cell(double value) { pending_.push_back(format(value)); }
void CsvWriter::cell(long value) { pending_.push_back(std::to_string(value)); }

void CsvWriter::end_row() {
  row(pending_);
  pending_.clear();
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  {
    std::ofstream out(tmp_path_, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("csv: cannot open " + tmp_path_);
    out << buffer_;
    if (!out) throw std::runtime_error("csv: short write on " + tmp_path_);
  }
  if (std::rename(tmp_path_.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("csv: cannot rename " + tmp_path_ + " to " + path_);
}

}  // namespace psi_cli
