#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace emv {

/// Round-trip exact scientific notation (17 significant digits).
std::string format_sci(double v);

/// 17 significant digits, shortest of fixed/scientific ("6", "2.9999999999999996").
std::string format_g17(double v);

/// Comma-separated rows, LF line endings, fields quoted only when needed.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(std::initializer_list<std::string_view> fields);
  void row(const std::vector<std::string>& fields);

 private:
  void field(std::string_view f, bool first);
  std::ostream& out_;
};

}  // namespace emv
