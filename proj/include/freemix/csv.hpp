#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "freemix/errors.hpp"

namespace freemix {

/// Minimal CSV emitter with pinned float formatting (17 significant digits)
/// so identical runs produce byte-identical files.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path,
            std::initializer_list<const char*> header)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open output file " + path.string());
    std::vector<std::string> cells;
    for (const char* h : header) cells.emplace_back(h);
    row(cells);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << '\n';
  }

  static std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  static std::string fmt(long v) { return std::to_string(v); }
  static std::string fmt(bool v) { return v ? "1" : "0"; }

private:
  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }

  std::ofstream out_;
};

}  // namespace freemix
