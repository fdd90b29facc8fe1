#ifndef SPECGLUE_CORE_REPORT_HPP
#define SPECGLUE_CORE_REPORT_HPP

#include <string>
#include <variant>
#include <vector>

#include "core/common.hpp"

namespace sg {

// Machine-readable result table with the common column schema
// (quantity, lhs, rhs, residual, error_bound, r, q, bc, notes).
class Report {
 public:
  using Cell = std::variant<double, std::string>;

  Report();

  void set_meta(const std::string& key, const std::string& value);
  void add_row(const std::string& quantity, double lhs, double rhs, double residual,
               double error_bound, double r, int q, const std::string& bc,
               const std::string& notes = "");

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<Cell>& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }

  // A row passes when its residual is within max(error_bound, tolerance).
  void set_tolerance(double tol) { tolerance_ = tol; }
  double tolerance() const { return tolerance_; }
  bool pass() const;

  void write_csv(const std::string& path) const;
  void write_json(const std::string& path) const;
  void write(const std::string& path, const std::string& format) const;
  std::string to_json_string() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
  double tolerance_ = 0.0;
};

const char* version_string();

}  // namespace sg

#endif
