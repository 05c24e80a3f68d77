#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hyperheat {

inline constexpr const char* kToolVersion = "hyperheat 1.0.0";

struct Series {
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Named metrics and (x, y) series from one experiment run. Every key is
/// write-once; metrics must be finite and series x strictly increasing.
class ExperimentReport {
 public:
  ExperimentReport(std::string experiment, std::map<std::string, std::string> params);

  const std::string& experiment() const { return experiment_; }
  const std::map<std::string, std::string>& params() const { return params_; }
  const std::map<std::string, double>& metrics() const { return metrics_; }
  const std::map<std::string, Series>& series() const { return series_; }
  const std::string& config_hash() const { return config_hash_; }

  void set_metric(const std::string& name, double value);
  void add_series(const std::string& name, Series s);

  /// Throws DomainError when the metric is absent.
  double metric(const std::string& name) const;
  bool has_metric(const std::string& name) const { return metrics_.count(name) != 0; }
  const Series& get_series(const std::string& name) const;

 private:
  std::string experiment_;
  std::map<std::string, std::string> params_;
  std::map<std::string, double> metrics_;
  std::map<std::string, Series> series_;
  std::string config_hash_;
};

/// FNV-1a (64-bit) over "key=value\n" lines in key order, as 16 hex digits.
std::string config_hash(const std::map<std::string, std::string>& params);

/// 17 significant digits, locale-independent.
std::string format_double(double v);

std::string report_json(const ExperimentReport& report);
std::string series_csv(const Series& s);

/// Writes <experiment>.json and <experiment>.<series>.csv under out_dir (each
/// via a temporary file and rename). Returns the written paths in order.
/// Throws IoError.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& out_dir);

}  // namespace hyperheat
