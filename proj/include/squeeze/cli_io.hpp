#pragma once

// Data emission: CSV tables with shortest round-trip numbers and LF endings,
// schema-versioned JSON reports, and a run manifest listing every file written
// together with its SHA-256.

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "squeeze/experiments.hpp"
#include "squeeze/propagate.hpp"
#include "squeeze/sa_probe.hpp"
#include "squeeze/spectral.hpp"

namespace squeeze {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kOutDirEnv = "SQUEEZE_LAB_OUT_DIR";

std::string format_number(double v);

// header r,photon_number,norm_drift
std::string trajectory_csv(const Trajectory& t);
// header index,eigenvalue
std::string spectrum_csv(const SpectrumResult& s);
// Generic table; every row must match the header width.
std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

Trajectory parse_trajectory_csv(std::string_view text);
SpectrumResult parse_spectrum_csv(std::string_view text);

std::string sha256_hex(std::string_view bytes);
std::string utc_timestamp();

nlohmann::json to_json(const PowerLawFit& f);
nlohmann::json to_json(const ScalingReport& r);
nlohmann::json to_json(const Extrapolation& e);
nlohmann::json to_json(const ParityReport& r);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const Threshold& t);
nlohmann::json to_json(const SAClassification& c);
nlohmann::json to_json(const CriticalScan& s);

// Wraps a payload as {"schema_version", "kind", "data"} and serialises it.
std::string report_json(std::string_view kind, const nlohmann::json& data);

struct OutputRecord {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string tool_version;
  std::string started;
  std::string finished;
  std::vector<OutputRecord> outputs;
  bool seedless = true;

  nlohmann::json to_json() const;
};

// SQUEEZE_LAB_OUT_DIR when set and non-empty, otherwise `fallback`.
std::filesystem::path output_root(const std::filesystem::path& fallback = ".");

// Serialised file writer; relative paths resolve against the root and every
// write is recorded for the manifest.
class OutputWriter {
public:
  explicit OutputWriter(std::filesystem::path root);

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  std::filesystem::path write(const std::filesystem::path& p, std::string_view content);
  std::vector<OutputRecord> records() const;
  const std::filesystem::path& root() const noexcept { return root_; }

private:
  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::vector<OutputRecord> records_;
};

// Finishes the manifest with the writer's records and writes it to `p` (not
// listed in itself).
void write_manifest(RunManifest manifest, OutputWriter& writer, const std::filesystem::path& p);

std::string read_file(const std::filesystem::path& p);

}  // namespace squeeze
