#include "squeeze/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

#include "squeeze/error.hpp"

namespace squeeze {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "r,photon_number,norm_drift\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    out += format_number(t.r_grid[k]);
    out += ',';
    out += format_number(t.photon_number[k]);
    out += ',';
    out += format_number(t.norm_drift[k]);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const SpectrumResult& s) {
  std::string out = "index,eigenvalue\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_number(s.eigenvalues[k]);
    out += '\n';
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InvalidArgument("table row width differs from header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw IoError("bad number '" + std::string(field) + "' on line " + std::to_string(line));
  }
  return v;
}

// Rows of a CSV with the expected header; rejects CR and ragged rows.
std::vector<std::vector<double>> parse_table(std::string_view text, std::string_view header) {
  if (text.find('\r') != std::string_view::npos) throw IoError("CSV must use LF line endings");
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != header) {
    throw IoError("expected CSV header '" + std::string(header) + "'");
  }
  const std::size_t width = split(header, ',').size();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != width) throw IoError("wrong field count on line " + std::to_string(i + 1));
    std::vector<double> row;
    for (auto f : fields) row.push_back(parse_double(f, i + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Trajectory parse_trajectory_csv(std::string_view text) {
  Trajectory t;
  for (const auto& row : parse_table(text, "r,photon_number,norm_drift")) {
    t.r_grid.push_back(row[0]);
    t.photon_number.push_back(row[1]);
    t.norm_drift.push_back(row[2]);
  }
  return t;
}

SpectrumResult parse_spectrum_csv(std::string_view text) {
  SpectrumResult s;
  std::size_t expect = 0;
  for (const auto& row : parse_table(text, "index,eigenvalue")) {
    if (row[0] != static_cast<double>(expect++)) throw IoError("spectrum indices must be 0, 1, ...");
    s.eigenvalues.push_back(row[1]);
  }
  return s;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

// JSON has no infinities; they become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json finite_array(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(finite_or_null(x));
  return out;
}

json kerr_json(const std::optional<KerrSpec>& k) {
  if (!k) return nullptr;
  return {{"order", k->order}, {"strength", k->strength}};
}

json distance_json(const PairDistance& d) {
  return {{"dim_a", d.dim_a}, {"dim_b", d.dim_b}, {"distance", d.distance}};
}

}  // namespace

json to_json(const PowerLawFit& f) {
  return {{"alpha", f.alpha},
          {"gamma", f.gamma},
          {"r_squared", f.r_squared},
          {"index_range", {f.index_range.first, f.index_range.second}},
          {"points", f.points}};
}

json to_json(const ScalingReport& r) {
  return {{"dims", r.dims},
          {"largest", r.largest},
          {"three_quarter", r.three_quarter},
          {"eleven_twentieth", r.eleven_twentieth},
          {"largest_fit", to_json(r.largest_fit)},
          {"three_quarter_fit", to_json(r.three_quarter_fit)},
          {"eleven_twentieth_fit", to_json(r.eleven_twentieth_fit)}};
}

json to_json(const Extrapolation& e) {
  return {{"dims", e.dims},
          {"smallest", e.smallest},
          {"lambda_inf", e.lambda_inf},
          {"fit", to_json(e.fit)}};
}

json to_json(const ParityReport& r) {
  return {{"n", r.n},
          {"kerr", kerr_json(r.kerr)},
          {"dims", r.dims},
          {"max_photon", r.max_photon},
          {"even_even", distance_json(r.even_even)},
          {"odd_odd", distance_json(r.odd_odd)},
          {"even_odd", distance_json(r.even_odd)},
          {"even_odd_large", distance_json(r.even_odd_large)},
          {"r_grid", r.r_grid},
          {"photon_number", r.photon_number}};
}

json to_json(const SweepReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json d = json::array();
    for (const auto& pd : p.distances) d.push_back(distance_json(pd));
    points.push_back({{"strength", p.strength},
                      {"regulated", p.regulated},
                      {"max_photon", p.max_photon},
                      {"tolerance", p.tolerance},
                      {"dominance_ratio", p.dominance},
                      {"distances", d},
                      {"divergence_onset", p.divergence_onset ? json(*p.divergence_onset) : json(nullptr)},
                      {"amplitude", p.amplitude},
                      {"period", p.period ? json(*p.period) : json(nullptr)}});
  }
  return {{"n", r.n}, {"order", r.order}, {"dims", r.dims}, {"strengths", r.strengths},
          {"points", points}};
}

json to_json(const Threshold& t) {
  return {{"unregulated", t.unregulated},
          {"regulated", t.regulated},
          {"midpoint", t.midpoint},
          {"analytic", t.analytic}};
}

json to_json(const SAClassification& c) {
  return {{"verdict", to_string(c.verdict)},
          {"description", describe(c.verdict)},
          {"decay_exponent", c.decay_exponent},
          {"probe_depth", c.probe_depth},
          {"tail_indices", c.tail_indices},
          {"tail_norms", finite_array(c.tail_norms)},
          {"log_tail_norms", c.log_tail_norms},
          {"block_ratios", finite_array(c.block_ratios)},
          {"backward_independence", c.backward_independence},
          {"diagnostic", c.diagnostic}};
}

json to_json(const CriticalScan& s) {
  json results = json::array();
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    json item = to_json(s.results[i]);
    item["strength"] = s.strengths[i];
    results.push_back(std::move(item));
  }
  return {{"n", s.n},
          {"order", s.order},
          {"results", results},
          {"flip", s.flip ? json{s.flip->first, s.flip->second} : json(nullptr)}};
}

std::string report_json(std::string_view kind, const json& data) {
  const json doc = {{"schema_version", kSchemaVersion}, {"kind", kind}, {"data", data}};
  return doc.dump(2) + "\n";
}

json RunManifest::to_json() const {
  json outs = json::array();
  for (const auto& o : outputs) {
    outs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  }
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"parameters", parameters},
          {"tool_version", tool_version},
          {"started", started},
          {"finished", finished},
          {"outputs", outs},
          {"seedless", seedless}};
}

std::filesystem::path output_root(const std::filesystem::path& fallback) {
  const char* env = std::getenv(std::string(kOutDirEnv).c_str());
  if (env && *env) return env;
  return fallback;
}

OutputWriter::OutputWriter(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path OutputWriter::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : root_ / p;
}

std::filesystem::path OutputWriter::write(const std::filesystem::path& p, std::string_view content) {
  const auto target = resolve(p);
  std::lock_guard lock(mutex_);
  std::error_code ec;
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
  std::ofstream f(target, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + target.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw IoError("write failed for " + target.string());
  records_.push_back({target.string(), sha256_hex(content), content.size()});
  return target;
}

std::vector<OutputRecord> OutputWriter::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

void write_manifest(RunManifest manifest, OutputWriter& writer, const std::filesystem::path& p) {
  manifest.outputs = writer.records();
  std::sort(manifest.outputs.begin(), manifest.outputs.end(),
            [](const OutputRecord& a, const OutputRecord& b) { return a.path < b.path; });
  if (manifest.finished.empty()) manifest.finished = utc_timestamp();
  const auto target = writer.resolve(p);
  std::error_code ec;
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path(), ec);
  std::ofstream f(target, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + target.string() + " for writing");
  f << manifest.to_json().dump(2) << '\n';
  if (!f) throw IoError("write failed for " + target.string());
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace squeeze
