#ifndef SDI_IO_HPP_
#define SDI_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sdi/fusion.hpp"
#include "sdi/learn.hpp"
#include "sdi/trace.hpp"

namespace sdi {

// Trace files: header `t_ns,x,y,z`, one row per sample, doubles printed
// with 17 significant digits so values round-trip exactly.
void write_trace_csv(const Trace& trace, const std::string& path);
Trace read_trace_csv(const std::string& path);

// One JSON object per line, fields: path, sensor, label, activity, rate_hz,
// seed, session_id. Paths are relative to the manifest's directory.
struct ManifestEntry {
  std::string path;
  SensorKind sensor = SensorKind::Gyroscope;
  Label label = Label::Benign;
  Activity activity = Activity::Rest;
  double rate_hz = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t session_id = 0;
};

ManifestEntry manifest_entry_for(const Trace& trace, const std::string& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path);
std::vector<ManifestEntry> read_manifest(const std::string& path);

// Write a trace to dir and return its manifest entry.
ManifestEntry store_trace(const Trace& trace, const std::string& dir,
                          const std::string& filename);

// Load every trace referenced by dir/manifest.jsonl, metadata applied.
std::vector<Trace> load_trace_dir(const std::string& dir);

// Feature tables: header `label,<feature names...>`.
void write_features_csv(const LearnDataset& ds, const std::string& path);
LearnDataset read_features_csv(const std::string& path);

// SDI-1 verdicts: header `window_start_ns,verdict`.
void write_verdicts_csv(const std::vector<WindowVerdict>& verdicts,
                        const std::string& path);

// Fusion verdicts: header `window_start_ns,mse,verdict` where mse is the
// mean of the verdict window's MSE values.
struct FusionVerdictRow {
  std::int64_t window_start_ns = 0;
  double mse = 0.0;
  int verdict = 0;
};

void write_fusion_verdicts_csv(const std::vector<FusionVerdictRow>& rows,
                               const std::string& path);

std::string format_double(double v);

} // namespace sdi

#endif // SDI_IO_HPP_
