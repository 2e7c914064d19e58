#ifndef NONGAUSS_CSV_HPP
#define NONGAUSS_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "nongauss/randsource.hpp"

namespace nongauss {

struct CsvTable {
  std::vector<std::string> header;  // empty unless read with header = true
  SampleMatrix data;
};

/// Comma separated, one realisation per row. Throws std::runtime_error on ragged or non-numeric input.
CsvTable read_csv(std::istream& in, bool header = false);
CsvTable read_csv_file(const std::string& path, bool header = false);

/// Values written with 17 significant digits so they round-trip exactly.
void write_csv(std::ostream& out, const SampleMatrix& x, const std::vector<std::string>& header = {});
void write_csv_file(const std::string& path, const SampleMatrix& x, const std::vector<std::string>& header = {});

}  // namespace nongauss

#endif  // NONGAUSS_CSV_HPP
