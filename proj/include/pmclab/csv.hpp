#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace pmclab {

inline std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Header-first CSV writer; numbers carry 17 significant digits so replays
// are byte-identical.
class CsvFile {
 public:
  CsvFile(const std::string& path, const std::vector<std::string>& header)
      : os_(path) {
    write(header);
  }

  void write(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << cells[i];
    }
    os_ << '\n';
  }

  bool good() const { return os_.good(); }

 private:
  std::ofstream os_;
};

}  // namespace pmclab
