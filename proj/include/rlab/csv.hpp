#pragma once

#include <string>
#include <vector>

namespace rlab::csv {

// Shortest decimal string that round-trips to the same double. Keeps CSV
// output byte-identical across runs and platforms with the same toolchain.
std::string format_double(double value);

std::string format_int(long long value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// Minimal comma-separated reader (no quoting; none of our files need it).
Table read_csv(const std::string& path);

class Writer {
 public:
  explicit Writer(std::string path);
  void row(const std::vector<std::string>& cells);
  // Writes the file atomically on success; throws on I/O failure.
  void finish();

 private:
  std::string path_;
  std::string body_;
  bool finished_ = false;
};

}  // namespace rlab::csv
