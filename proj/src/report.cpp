#include "qscar/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qscar {

namespace {

std::string format_residual(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

}  // namespace

void CheckReport::add(const std::string& name, double residual, double tolerance) {
  records.push_back({name, residual <= tolerance, residual, tolerance});
}

bool CheckReport::all_passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const CheckRecord& r) { return r.passed; });
}

double CheckReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.residual);
  return m;
}

void Report::kv(const std::string& key, const std::string& value) {
  items.emplace_back(key, value);
}

void Report::kv(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  items.emplace_back(key, buf);
}

void Report::kv(const std::string& key, long value) {
  items.emplace_back(key, std::to_string(value));
}

void Report::check(const std::string& name, bool pass, double residual, double tolerance) {
  std::ostringstream os;
  os << name << " status=" << (pass ? "pass" : "fail")
     << " residual=" << format_residual(residual) << " tol=" << format_residual(tolerance);
  items.emplace_back("check", os.str());
  if (!pass) failed = true;
}

void Report::merge_checks(const CheckReport& checks, const std::string& prefix) {
  for (const auto& r : checks.records)
    check(prefix.empty() ? r.name : prefix + " " + r.name, r.passed, r.residual, r.tolerance);
}

std::string Report::render() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  for (const auto& [k, v] : items) os << k << ": " << v << "\n";
  os << "result: " << (failed ? "fail" : "pass") << "\n";
  return os.str();
}

}  // namespace qscar
