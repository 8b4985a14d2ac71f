#include "sintermech/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "sintermech/error.hpp"

namespace sintermech::csv {

std::string format_value(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero in output
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void Writer::header(const std::vector<std::string>& columns) {
  width_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void Writer::row(const std::vector<double>& values) {
  if (values.size() != width_) {
    throw NumericalError("csv: row has " + std::to_string(values.size()) + " values, header has " +
                         std::to_string(width_));
  }
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NumericalError("csv: non-finite value in column " + std::to_string(i));
    }
    if (i) line += ',';
    line += format_value(values[i]);
  }
  line += '\n';
  out_ << line;
}

}  // namespace sintermech::csv
