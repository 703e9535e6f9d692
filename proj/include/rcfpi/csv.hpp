#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

namespace rcfpi {

/// CSV writer with fixed shortest-roundtrip double formatting so reruns with
/// the same seed produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  CsvWriter& field(const std::string& s) {
    sep();
    os_ << s;
    return *this;
  }
  CsvWriter& field(std::int64_t v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvWriter& field(double v) {
    sep();
    os_ << format_double(v);
    return *this;
  }
  void end_row() {
    os_ << '\n';
    first_ = true;
  }

  static std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  bool first_ = true;
};

}  // namespace rcfpi
