#ifndef PSI_CLI_CSV_HPP
#define PSI_CLI_CSV_HPP

#include <string>
#include <vector>

namespace psi_cli {

// Deterministic CSV emitter: schema-version line, '#'-prefixed metadata, one
// header row, then data.  Doubles are printed with %.17g so identical runs
// produce identical bytes.  The file is written to <path>.tmp and renamed on
// close (atomic on POSIX).
class CsvWriter {
 public:
  explicit CsvWriter(std::string path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void metadata(const std::string& key, const std::string& value);
  void metadata(const std::string& key, double value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  void cell(std::string text);
  void cell(double value);
  void cell(long value);
  void end_row();

  // Renames the temp file into place; no-op on second call.
  void close();

  static std::string format(double value);

 private:
  std::string path_;
  std::string tmp_path_;
  std::string buffer_;
  std::vector<std::string> pending_;
  bool closed_ = false;
};

}  // namespace psi_cli

#endif
