#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dicke_gmc/cli.hpp"

namespace dicke::cli {

/// One CSV/JSON field: blank, an integer, or a real printed with 17 significant digits.
struct Cell {
  enum class Kind { blank, integer, real };
  Kind kind = Kind::blank;
  std::int64_t integer = 0;
  double real = 0.0;

  static Cell none() { return {}; }
  static Cell of(std::int64_t v) { return {Kind::integer, v, 0.0}; }
  static Cell of(int v) { return of(static_cast<std::int64_t>(v)); }
  static Cell of(double v) { return {Kind::real, 0, v}; }
};

std::string format_real(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  /// Extra header comment (without the leading "# ").
  void note(std::string line);
  void add_row(std::vector<Cell> row);

  std::size_t rows() const noexcept { return rows_.size(); }

  /// Writes `<stem>.csv` or `<stem>.json` under config.out_dir; returns the path.
  std::filesystem::path write(const RunConfig& config, const std::string& stem) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> notes_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace dicke::cli
