#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmclab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat "key = value" configuration with a typed schema. Unknown keys are
// rejected by name; every numeric key carries a documented range.
class ExperimentConfig {
 public:
  // Parses and validates; throws ConfigError on any violation.
  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_text(const std::string& text);

  // Dry-run check: returns every violation instead of throwing.
  static std::vector<std::string> validate_file(const std::string& path);
  static std::vector<std::string> validate_text(const std::string& text);

  const std::string& experiment() const { return experiment_; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  uint64_t get_seed() const;
  std::vector<double> get_list(const std::string& key) const;
  Eigen::Vector3d get_vector(const std::string& key) const;

  // Raw key/value pairs, for the manifest echo.
  const std::map<std::string, std::string>& entries() const { return values_; }

  // CLI overrides (applied after parsing, still schema-checked).
  void override_value(const std::string& key, const std::string& value);

 private:
  static std::vector<std::string> check(const std::map<std::string, std::string>&);
  std::map<std::string, std::string> values_;
  std::string experiment_;
};

}  // namespace pmclab
