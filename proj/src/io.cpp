#include "sdi/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdi/errors.hpp"

namespace sdi {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "t_ns,x,y,z\n";
  for (const auto& s : trace.samples) {
    os << s.t_ns << ',' << format_double(s.v.x) << ',' << format_double(s.v.y)
       << ',' << format_double(s.v.z) << '\n';
  }
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("t_ns,x,y,z", 0) != 0)
    throw DataError("bad trace CSV header in " + path);

  Trace trace;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Sample s;
    char comma = 0;
    if (!(ls >> s.t_ns >> comma >> s.v.x >> comma >> s.v.y >> comma >> s.v.z))
      throw DataError("bad trace CSV row in " + path + ": " + line);
    if (!trace.samples.empty() && s.t_ns <= trace.samples.back().t_ns)
      throw DataError("timestamps must be strictly increasing in " + path);
    trace.samples.push_back(s);
  }
  if (trace.samples.empty()) throw DataError("trace CSV has no samples: " + path);
  return trace;
}

ManifestEntry manifest_entry_for(const Trace& trace, const std::string& path) {
  ManifestEntry e;
  e.path = path;
  e.sensor = trace.sensor;
  e.label = trace.label;
  e.activity = trace.activity;
  e.rate_hz = trace.nominal_rate_hz;
  e.seed = trace.seed;
  e.session_id = trace.session_id;
  return e;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  for (const auto& e : entries) {
    json j;
    j["path"] = e.path;
    j["sensor"] = to_string(e.sensor);
    j["label"] = to_string(e.label);
    j["activity"] = to_string(e.activity);
    j["rate_hz"] = e.rate_hz;
    j["seed"] = e.seed;
    j["session_id"] = e.session_id;
    os << j.dump() << '\n';
  }
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open for reading: " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("bad manifest line: " + line);
    ManifestEntry e;
    e.path = j.at("path").get<std::string>();
    e.sensor = sensor_from_string(j.at("sensor").get<std::string>());
    e.label = label_from_string(j.at("label").get<std::string>());
    e.activity = activity_from_string(j.at("activity").get<std::string>());
    e.rate_hz = j.at("rate_hz").get<double>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.session_id = j.at("session_id").get<std::uint64_t>();
    entries.push_back(std::move(e));
  }
  return entries;
}

ManifestEntry store_trace(const Trace& trace, const std::string& dir,
                          const std::string& filename) {
  fs::create_directories(dir);
  write_trace_csv(trace, (fs::path(dir) / filename).string());
  return manifest_entry_for(trace, filename);
}

std::vector<Trace> load_trace_dir(const std::string& dir) {
  const auto manifest = read_manifest((fs::path(dir) / "manifest.jsonl").string());
  std::vector<Trace> traces;
  traces.reserve(manifest.size());
  for (const auto& e : manifest) {
    Trace t = read_trace_csv((fs::path(dir) / e.path).string());
    t.sensor = e.sensor;
    t.label = e.label;
    t.activity = e.activity;
    t.nominal_rate_hz = e.rate_hz;
    t.seed = e.seed;
    t.session_id = e.session_id;
    traces.push_back(std::move(t));
  }
  return traces;
}

void write_features_csv(const LearnDataset& ds, const std::string& path) {
  if (ds.feature_names.size() != ds.arity() && !ds.x.empty())
    throw DataError("feature names and arity differ");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "label";
  for (const auto& name : ds.feature_names) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    os << ds.y[i];
    for (const double v : ds.x[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

LearnDataset read_features_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty features CSV: " + path);

  LearnDataset ds;
  {
    std::istringstream hs(line);
    std::string col;
    bool first = true;
    while (std::getline(hs, col, ',')) {
      if (first) {
        if (col != "label") throw DataError("features CSV must start with label column");
        first = false;
      } else {
        ds.feature_names.push_back(col);
      }
    }
  }

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    if (!std::getline(ls, cell, ',')) throw DataError("bad features row: " + line);
    ds.y.push_back(std::stoi(cell));
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != ds.feature_names.size())
      throw DataError("features row arity mismatch: " + line);
    ds.x.push_back(std::move(row));
  }
  return ds;
}

void write_verdicts_csv(const std::vector<WindowVerdict>& verdicts,
                        const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "window_start_ns,verdict\n";
  for (const auto& v : verdicts) os << v.window_start_ns << ',' << v.verdict << '\n';
}

void write_fusion_verdicts_csv(const std::vector<FusionVerdictRow>& rows,
                               const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "window_start_ns,mse,verdict\n";
  for (const auto& r : rows) {
    os << r.window_start_ns << ',' << format_double(r.mse) << ',' << r.verdict
       << '\n';
  }
}

} // namespace sdi
