#include "table.hpp"

#include <fmt/format.h>

#include <fstream>
#include "json.hpp"
#include <stdexcept>

namespace dicke::cli {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::note(std::string line) { notes_.push_back(std::move(line)); }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("row width does not match the header");
  rows_.push_back(std::move(row));
}

std::filesystem::path Table::write(const RunConfig& config, const std::string& stem) const {
  std::filesystem::create_directories(config.out_dir);
  const bool json = config.format == Format::json;
  const auto path = config.out_dir / (stem + (json ? ".json" : ".csv"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());

  const std::string version = fmt::format("{} {}", kToolName, kToolVersion);
  if (json) {
    nlohmann::ordered_json doc;
    doc["tool-version"] = version;
    doc["command-line"] = config.command_line;
    doc["units"] = "natural-log units (nats)";
    doc["notes"] = notes_;
    doc["columns"] = columns_;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      auto r = nlohmann::ordered_json::array();
      for (const auto& c : row) {
        switch (c.kind) {
          case Cell::Kind::blank: r.push_back(nullptr); break;
          case Cell::Kind::integer: r.push_back(c.integer); break;
          case Cell::Kind::real: r.push_back(c.real); break;
        }
      }
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
  } else {
    out << "# tool-version " << version << '\n';
    out << "# command-line " << config.command_line << '\n';
    out << "# natural-log units (nats)\n";
    for (const auto& n : notes_) out << "# " << n << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        const auto& c = row[i];
        if (c.kind == Cell::Kind::integer) out << c.integer;
        if (c.kind == Cell::Kind::real) out << format_real(c.real);
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return path;
}

}  // namespace dicke::cli
