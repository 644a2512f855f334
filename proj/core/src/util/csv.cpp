#include "rbeig/util/csv.hpp"

#include <cstdio>
#include <sstream>

#include "rbeig/errors.hpp"

namespace rbeig {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : columns_(header.size()), path_(path.string()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw ConfigError("cannot write " + path_);
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::sep() {
  if (filled_ == columns_) throw ConfigError("too many columns in a row of " + path_);
  if (filled_++) row_ += ',';
}

CsvWriter& CsvWriter::operator<<(double v) {
  sep();
  row_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long v) {
  sep();
  row_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  sep();
  row_ += v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw ConfigError("short row in " + path_);
  out_ << row_ << '\n';
  out_.flush();
  row_.clear();
  filled_ = 0;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("CSV column '" + name + "' not found");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const auto& cell = rows.at(row).at(column(name));
  try {
    return std::stod(cell);
  } catch (const std::exception&) {
    throw ConfigError("CSV cell '" + cell + "' in column " + name + " is not a number");
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  if (!std::getline(in, line)) throw ConfigError("empty CSV " + path.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw ConfigError("ragged CSV " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace rbeig
