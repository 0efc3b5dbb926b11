#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace srptq {

/// Number formatting for every CSV the project writes: 12 significant digits,
/// '.' as decimal separator regardless of locale.
std::string format_number(double v);

class CsvRow {
 public:
  CsvRow& add(double v) { return raw(format_number(v)); }
  CsvRow& add(std::integral auto v) { return raw(std::to_string(v)); }
  CsvRow& add(std::string_view s) { return raw(s); }
  CsvRow& add(const char* s) { return raw(s); }
  CsvRow& add(bool b) { return raw(b ? "1" : "0"); }

  const std::string& str() const noexcept { return line_; }

 private:
  CsvRow& raw(std::string_view s) {
    if (!first_) line_ += ',';
    line_ += s;
    first_ = false;
    return *this;
  }

  std::string line_;
  bool first_ = true;
};

}  // namespace srptq
