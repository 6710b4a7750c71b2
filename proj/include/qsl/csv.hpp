#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qsl/types.hpp"

namespace qsl {

// shortest round-trippable representation at 9 significant digits
inline std::string format_g9(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

// minimal writer: comma separator, '\n' line ends, numbers via format_g9
class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : path_(path), f_(path, std::ios::binary) {
    if (!f_) throw IoError("cannot open " + path + " for writing");
  }

  void header(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
      if (!first) f_ << ',';
      f_ << n;
      first = false;
    }
    f_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) f_ << ',';
      f_ << format_g9(v);
      first = false;
    }
    f_ << '\n';
  }

  void row(const std::vector<double>& values) {
    bool first = true;
    for (double v : values) {
      if (!first) f_ << ',';
      f_ << format_g9(v);
      first = false;
    }
    f_ << '\n';
  }

  void close() {
    f_.close();
    if (f_.fail()) throw IoError("error while writing " + path_);
  }

 private:
  std::string path_;
  std::ofstream f_;
};

}  // namespace qsl
