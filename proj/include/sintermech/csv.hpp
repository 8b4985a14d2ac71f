#pragma once

// CSV emission: mandatory header, 12 significant digits, '.' decimal point,
// '\n' line endings, finite values only.

#include <iosfwd>
#include <string>
#include <vector>

namespace sintermech::csv {

std::string format_value(double v);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);
  /// Throws NumericalError on a non-finite value or a width mismatch.
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

}  // namespace sintermech::csv
