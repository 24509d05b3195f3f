#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "oswr/errors.hpp"

namespace oswr::experiments {

using CsvCell = std::variant<double, std::string>;

/// Shortest round-trip decimal form; "nan"/"inf"/"-inf" for non-finite.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("format_number: conversion failed");
  return std::string(buf, end);
}

/// Rectangular table with a header row.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<CsvCell>>& rows() const noexcept { return rows_; }
  std::size_t n_rows() const noexcept { return rows_.size(); }

  void add_row(std::vector<CsvCell> row) {
    detail::require(row.size() == header_.size(), "CSV row width does not match the header");
    rows_.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == name) return i;
    throw ValidationError("CSV column '" + name + "' not found");
  }

  double number(std::size_t row, const std::string& col) const { return std::get<double>(rows_[row][column(col)]); }
  const std::string& text(std::size_t row, const std::string& col) const {
    return std::get<std::string>(rows_[row][column(col)]);
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) out += ',';
      out += header_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        if (const auto* d = std::get_if<double>(&row[i])) {
          out += format_number(*d);
        } else {
          out += std::get<std::string>(row[i]);
        }
      }
      out += '\n';
    }
    return out;
  }

  void write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path.string() + "' for writing");
    os << to_string();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace oswr::experiments
