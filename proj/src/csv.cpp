#include "nongauss/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nongauss {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t row, std::size_t col) {
  const std::string f = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
    throw std::runtime_error("malformed CSV: non-numeric field '" + f + "' at row " + std::to_string(row + 1) +
                             ", column " + std::to_string(col + 1));
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& in, bool header) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (first && header) {
      for (auto& f : fields) table.header.push_back(trim(f));
      width = fields.size();
      first = false;
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw std::runtime_error("malformed CSV: row " + std::to_string(rows.size() + 1) + " has " +
                               std::to_string(fields.size()) + " fields, expected " + std::to_string(width));
    std::vector<double> r(width);
    for (std::size_t j = 0; j < width; ++j) r[j] = parse_number(fields[j], rows.size(), j);
    rows.push_back(std::move(r));
    first = false;
  }
  if (rows.empty()) throw std::runtime_error("malformed CSV: no data rows");
  table.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

CsvTable read_csv_file(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in, header);
}

void write_csv(std::ostream& out, const SampleMatrix& x, const std::vector<std::string>& header) {
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != x.cols()) throw std::invalid_argument("csv header width mismatch");
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  char buf[32];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x(i, j), std::chars_format::general, 17);
      if (j) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const SampleMatrix& x, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, x, header);
}

}  // namespace nongauss
