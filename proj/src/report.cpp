#include "hyperheat/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <system_error>

#include "json.hpp"

#include "hyperheat/error.hpp"

namespace hyperheat {

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move " + tmp.string() + " to " + path.string());
  }
}

void append_array(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  out += ']';
}

}  // namespace

ExperimentReport::ExperimentReport(std::string experiment, std::map<std::string, std::string> params)
    : experiment_(std::move(experiment)),
      params_(std::move(params)),
      config_hash_(hyperheat::config_hash(params_)) {}

void ExperimentReport::set_metric(const std::string& name, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::DomainError, "metric '" + name + "' is not finite");
  }
  if (!metrics_.emplace(name, value).second) {
    throw Error(ErrorCode::DomainError, "metric '" + name + "' already set");
  }
}

void ExperimentReport::add_series(const std::string& name, Series s) {
  if (s.x.size() != s.y.size()) {
    throw Error(ErrorCode::DomainError, "series '" + name + "' has mismatched lengths");
  }
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
      throw Error(ErrorCode::DomainError, "series '" + name + "' has a non-finite entry");
    }
    if (i > 0 && !(s.x[i] > s.x[i - 1])) {
      throw Error(ErrorCode::DomainError, "series '" + name + "' x is not strictly increasing");
    }
  }
  if (series_.count(name)) {
    throw Error(ErrorCode::DomainError, "series '" + name + "' already set");
  }
  series_.emplace(name, std::move(s));
}

double ExperimentReport::metric(const std::string& name) const {
  auto it = metrics_.find(name);
  if (it == metrics_.end()) {
    throw Error(ErrorCode::DomainError, experiment_ + ": no metric '" + name + "'");
  }
  return it->second;
}

const Series& ExperimentReport::get_series(const std::string& name) const {
  auto it = series_.find(name);
  if (it == series_.end()) {
    throw Error(ErrorCode::DomainError, experiment_ + ": no series '" + name + "'");
  }
  return it->second;
}

std::string config_hash(const std::map<std::string, std::string>& params) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  };
  for (const auto& [k, v] : params) {
    for (char c : k) mix(c);
    mix('=');
    for (char c : v) mix(c);
    mix('\n');
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string report_json(const ExperimentReport& report) {
  std::string out = "{\n";
  out += "  \"experiment\": " + quoted(report.experiment()) + ",\n";

  out += "  \"metrics\": {";
  bool first = true;
  for (const auto& [k, v] : report.metrics()) {
    out += first ? "\n" : ",\n";
    out += "    " + quoted(k) + ": " + format_double(v);
    first = false;
  }
  out += first ? "},\n" : "\n  },\n";

  out += "  \"params\": {";
  first = true;
  for (const auto& [k, v] : report.params()) {
    out += first ? "\n" : ",\n";
    out += "    " + quoted(k) + ": " + quoted(v);
    first = false;
  }
  out += first ? "},\n" : "\n  },\n";

  out += "  \"provenance\": {\n";
  out += "    \"config_hash\": " + quoted(report.config_hash()) + ",\n";
  out += "    \"tool_version\": " + quoted(kToolVersion) + "\n";
  out += "  },\n";

  out += "  \"series\": {";
  first = true;
  for (const auto& [name, s] : report.series()) {
    out += first ? "\n" : ",\n";
    out += "    " + quoted(name) + ": {\n";
    out += "      \"x\": ";
    append_array(out, s.x);
    out += ",\n      \"x_label\": " + quoted(s.x_label) + ",\n";
    out += "      \"y\": ";
    append_array(out, s.y);
    out += ",\n      \"y_label\": " + quoted(s.y_label) + "\n    }";
    first = false;
  }
  out += first ? "}\n" : "\n  }\n";
  out += "}\n";
  return out;
}

std::string series_csv(const Series& s) {
  std::string out = s.x_label + "," + s.y_label + "\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    out += format_double(s.x[i]);
    out += ',';
    out += format_double(s.y[i]);
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + out_dir.string());
  }
  std::vector<std::filesystem::path> written;
  auto json_path = out_dir / (report.experiment() + ".json");
  write_atomically(json_path, report_json(report));
  written.push_back(json_path);
  for (const auto& [name, s] : report.series()) {
    auto csv_path = out_dir / (report.experiment() + "." + name + ".csv");
    write_atomically(csv_path, series_csv(s));
    written.push_back(csv_path);
  }
  return written;
}

}  // namespace hyperheat
