#pragma once

#include <string>
#include <vector>

namespace qscar {

struct CheckRecord {
  std::string name;
  bool passed;
  double residual;
  double tolerance;
};

struct CheckReport {
  std::vector<CheckRecord> records;

  void add(const std::string& name, double residual, double tolerance);
  bool all_passed() const;
  double max_residual() const;
};

/// Deterministic "key: value" report with fixed section order.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> items;
  bool failed = false;

  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, double value);
  void kv(const std::string& key, long value);
  void check(const std::string& name, bool pass, double residual, double tolerance);
  void merge_checks(const CheckReport& checks, const std::string& prefix = "");
  std::string render() const;
};

}  // namespace qscar
