#include "core/report.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace sg {

const char* version_string() { return "0.1.0"; }

Report::Report()
    : columns_{"quantity", "lhs",      "rhs", "residual", "error_bound",
               "r",        "q",        "bc",  "notes"} {
  set_meta("version", version_string());
}

void Report::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : meta_) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  meta_.push_back({key, value});
}

void Report::add_row(const std::string& quantity, double lhs, double rhs,
                     double residual, double error_bound, double r, int q,
                     const std::string& bc, const std::string& notes) {
  std::vector<Cell> row;
  row.emplace_back(quantity);
  row.emplace_back(lhs);
  row.emplace_back(rhs);
  row.emplace_back(residual);
  row.emplace_back(error_bound);
  row.emplace_back(r);
  row.emplace_back(static_cast<double>(q));
  row.emplace_back(bc);
  row.emplace_back(notes);
  rows_.push_back(std::move(row));
}

bool Report::pass() const {
  for (const auto& row : rows_) {
    double residual = std::get<double>(row[3]);
    double bound = std::get<double>(row[4]);
    if (residual > std::max(bound, tolerance_)) return false;
  }
  return true;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string cell_text(const Report::Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  return std::get<std::string>(c);
}

}  // namespace

void Report::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << "\n";
  for (std::size_t j = 0; j < columns_.size(); ++j)
    out << columns_[j] << (j + 1 < columns_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out << csv_escape(cell_text(row[j])) << (j + 1 < row.size() ? "," : "\n");
  }
  out << "# pass = " << (pass() ? "true" : "false") << "\n";
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

std::string Report::to_json_string() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta;
  for (const auto& [k, v] : meta_) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = columns_;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (std::holds_alternative<double>(c))
        r.push_back(std::get<double>(c));
      else
        r.push_back(std::get<std::string>(c));
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  j["pass"] = pass();
  return j.dump(2) + "\n";
}

void Report::write_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << to_json_string();
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

void Report::write(const std::string& path, const std::string& format) const {
  if (format == "csv")
    write_csv(path);
  else if (format == "json")
    write_json(path);
  else
    fail(ErrorCode::InvalidArgument, "unknown output format '" + format + "'");
}

}  // namespace sg
