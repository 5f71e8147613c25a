#include "sdi/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdi/errors.hpp"
#include "sdi/io.hpp"

namespace sdi {

namespace fs = std::filesystem;

void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value) {
  auto as_int = [&] { return std::stoi(value); };
  auto as_double = [&] { return std::stod(value); };
  auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };

  if (key == "seed") cfg.seed = as_u64();
  else if (key == "out") cfg.out_dir = value;
  else if (key == "sim.per_activity") cfg.dataset.per_activity = as_int();
  else if (key == "sim.per_rocking_variant") cfg.dataset.per_rocking_variant = as_int();
  else if (key == "sim.solenoid_traces") cfg.dataset.solenoid_traces = as_int();
  else if (key == "sim.rolling_pairs") cfg.dataset.rolling_pairs = as_int();
  else if (key == "sim.duration_s") cfg.dataset.duration_s = as_double();
  else if (key == "sim.gyro_noise_std") cfg.dataset.gyro_noise_std = as_double();
  else if (key == "sim.mag_noise_std") cfg.dataset.env.sensor_noise_std = as_double();
  else if (key == "sim.b_world_x") cfg.dataset.env.b_world.x = as_double();
  else if (key == "sim.b_world_y") cfg.dataset.env.b_world.y = as_double();
  else if (key == "sim.b_world_z") cfg.dataset.env.b_world.z = as_double();
  else if (key == "sim.jitter_ms") {
    cfg.dataset.jitter_ns = static_cast<std::int64_t>(as_double() * 1e6);
  } else if (key == "sim.rocking_sine_freq_hz") {
    cfg.dataset.rocking_sine_freq_hz = as_double();
  } else if (key == "sim.rocking_amplitude") {
    cfg.dataset.rocking_amplitude = as_double();
  } else if (key == "sim.solenoid_amplitude_ut") {
    cfg.dataset.solenoid_amplitude_ut = as_double();
  } else if (key == "features.variant") {
    cfg.gyro_variant = variant_from_string(value);
  } else if (key == "features.mag_variant") {
    cfg.mag_variant = variant_from_string(value);
  } else if (key == "features.realtime_variant") {
    cfg.realtime_variant = variant_from_string(value);
  } else if (key == "model.max_depth") cfg.max_depth = as_int();
  else if (key == "model.min_leaf") cfg.min_leaf = as_int();
  else if (key == "model.kfold") cfg.kfold = as_int();
  else if (key == "model.relieff_k") cfg.relieff_k = as_int();
  else if (key == "model.one_sided_quantile") cfg.one_sided_quantile = as_double();
  else if (key == "detect.windows_ms") {
    cfg.windows_ms.clear();
    std::istringstream ws(value);
    std::string item;
    while (std::getline(ws, item, ',')) cfg.windows_ms.push_back(std::stoi(item));
  } else if (key == "fusion.grid_rate_hz") {
    cfg.fusion_grid_rate_hz = as_double();
  } else if (key == "fusion.mse_window") cfg.mse_window = as_int();
  else if (key == "fusion.trip_fraction") cfg.trip_fraction = as_double();
  else if (key == "fusion.mse_feature_window") cfg.mse_feature_window = as_int();
  else throw UsageError("unknown config key: " + key);
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config: " + path);

  ExperimentConfig cfg;
  bool saw_seed = false;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r'))
      line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("bad config line: " + line);
    const std::string key = line.substr(0, eq);
    apply_config_line(cfg, key, line.substr(eq + 1));
    if (key == "seed") saw_seed = true;
  }
  if (!saw_seed) {
    if (const char* env = std::getenv("SDI_SEED")) {
      cfg.seed = static_cast<std::uint64_t>(std::stoull(env));
    }
  }
  return cfg;
}

LearnDataset features_dataset(const std::vector<Trace>& traces,
                              FeatureVariant variant, int window_ms) {
  LearnDataset ds;
  ds.feature_names = feature_names(variant);
  for (const Trace& trace : traces) {
    const int label = trace.label == Label::Benign ? 0 : 1;
    if (window_ms <= 0) {
      ds.x.push_back(features_for_trace(trace, variant).values);
      ds.y.push_back(label);
      continue;
    }
    const std::int64_t window_ns = static_cast<std::int64_t>(window_ms) * 1'000'000;
    const std::size_t min_samples = variant == FeatureVariant::Full ? 4 : 2;
    std::size_t cursor = 0;
    for (std::int64_t ws = trace.start_ns(); ws + window_ns <= trace.end_ns();
         ws += window_ns) {
      Trace chunk;
      chunk.sensor = trace.sensor;
      chunk.nominal_rate_hz = trace.nominal_rate_hz;
      while (cursor < trace.samples.size() &&
             trace.samples[cursor].t_ns < ws + window_ns) {
        chunk.samples.push_back(trace.samples[cursor]);
        ++cursor;
      }
      if (chunk.samples.size() < min_samples) continue;
      ds.x.push_back(features_for_trace(chunk, variant).values);
      ds.y.push_back(label);
    }
  }
  return ds;
}

Quantiles quantiles_of(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  auto q = [&](double p) {
    const double idx = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = static_cast<std::size_t>(std::ceil(idx));
    const double alpha = idx - static_cast<double>(lo);
    return values[lo] * (1.0 - alpha) + values[hi] * alpha;
  };
  return {values.front(), q(0.25), q(0.5), q(0.75), q(0.9), values.back()};
}

const Report::Entry* Report::find(const std::string& defense, int window_ms) const {
  for (const auto& e : entries) {
    if (e.defense == defense && e.window_ms == window_ms) return &e;
  }
  return nullptr;
}

namespace {

template <typename T>
std::vector<T> even_half(const std::vector<T>& v) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

template <typename T>
std::vector<T> odd_half(const std::vector<T>& v) {
  std::vector<T> out;
  for (std::size_t i = 1; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

std::vector<Trace> firsts(const std::vector<std::pair<Trace, Trace>>& pairs) {
  std::vector<Trace> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.first);
  return out;
}

std::vector<Trace> seconds(const std::vector<std::pair<Trace, Trace>>& pairs) {
  std::vector<Trace> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.second);
  return out;
}

std::vector<Trace> concat(std::vector<Trace> a, const std::vector<Trace>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// All MSE values of every pair in the group, plus per-pair streams.
struct GroupMse {
  std::vector<MseStream> streams;
  std::vector<double> all_values;
};

GroupMse group_mse(const std::vector<std::pair<Trace, Trace>>& pairs,
                   double grid_rate_hz, int mse_window) {
  GroupMse g;
  for (const auto& [gyro, mag] : pairs) {
    const FusionSeries fs = build_fusion_series(gyro, mag, grid_rate_hz);
    MseStream stream = mse(fs, mse_window);
    g.all_values.insert(g.all_values.end(), stream.values.begin(),
                        stream.values.end());
    g.streams.push_back(std::move(stream));
  }
  return g;
}

void eval_fusion_windowed(const GroupMse& group, int label,
                          const FusionDetectorConfig& cfg, EvalResult& out) {
  for (const auto& stream : group.streams) {
    for (const auto& v : windowed_fusion_detect(stream, cfg)) {
      if (label == 1) {
        (v.verdict == 1 ? out.tp : out.fn)++;
      } else {
        (v.verdict == 0 ? out.tn : out.fp)++;
      }
    }
  }
}

void eval_sdi1_windowed(const std::vector<Trace>& traces, int label,
                        std::int64_t window_ms, const DecisionTree& tree,
                        FeatureVariant variant, EvalResult& out) {
  for (const Trace& trace : traces) {
    for (const auto& v : windowed_detect(trace, window_ms, tree, variant)) {
      if (label == 1) {
        (v.verdict == 1 ? out.tp : out.fn)++;
      } else {
        (v.verdict == 0 ? out.tn : out.fp)++;
      }
    }
  }
}

// Rethrows stage failures with the stage name attached.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(std::string("stage ") + name + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string("stage ") + name + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string("stage ") + name + ": " + e.what());
  }
}

} // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  Report report;

  DatasetConfig ds_cfg = cfg.dataset;
  ds_cfg.seed = cfg.seed;
  const TraceDataset traces =
      stage("simulate", [&] { return generate_dataset(ds_cfg); });

  // ---- SDI-1 offline: gyroscope defense ----
  const LearnDataset gyro_ds = stage("features", [&] {
    return features_dataset(
        concat(firsts(traces.benign_pairs), firsts(traces.rocking_pairs)),
        cfg.gyro_variant);
  });
  stage("sdi1-gyro", [&] {
    report.entries.push_back(
        {"sdi1_gyro_offline", 0,
         kfold_eval(gyro_ds, cfg.kfold, cfg.seed,
                    tree_trainer(cfg.max_depth, cfg.min_leaf))});
  });
  const DecisionTree gyro_tree = stage(
      "sdi1-gyro", [&] { return train_tree(gyro_ds, cfg.max_depth, cfg.min_leaf); });

  // ---- SDI-1 offline: magnetometer defense ----
  const LearnDataset mag_ds = stage("features", [&] {
    return features_dataset(
        concat(seconds(traces.benign_pairs), seconds(traces.solenoid_pairs)),
        cfg.mag_variant);
  });
  stage("sdi1-mag", [&] {
    report.entries.push_back(
        {"sdi1_mag_offline", 0,
         kfold_eval(mag_ds, cfg.kfold, cfg.seed,
                    tree_trainer(cfg.max_depth, cfg.min_leaf))});
  });
  const DecisionTree mag_tree = stage(
      "sdi1-mag", [&] { return train_tree(mag_ds, cfg.max_depth, cfg.min_leaf); });

  // ---- Feature ranking on the gyroscope dataset ----
  stage("relieff", [&] {
    const FeatureWeights weights = relieff_rank(gyro_ds, cfg.relieff_k);
    for (const std::size_t idx : ranking(weights)) {
      report.relieff_order.push_back(gyro_ds.feature_names[idx]);
      report.relieff_weights.push_back(weights.w[idx]);
    }
  });

  // ---- One-sided benign-envelope detector (gyro) ----
  stage("one-sided", [&] {
    LearnDataset benign_train;
    benign_train.feature_names = gyro_ds.feature_names;
    LearnDataset test;
    test.feature_names = gyro_ds.feature_names;
    for (std::size_t i = 0; i < gyro_ds.rows(); ++i) {
      if (gyro_ds.y[i] == 0 && i % 2 == 0) {
        benign_train.x.push_back(gyro_ds.x[i]);
        benign_train.y.push_back(0);
      } else if (i % 2 == 1) {
        test.x.push_back(gyro_ds.x[i]);
        test.y.push_back(gyro_ds.y[i]);
      }
    }
    const OneSidedModel one_sided = train_one_sided(benign_train, cfg.one_sided_quantile);
    EvalResult r;
    for (std::size_t i = 0; i < test.rows(); ++i) {
      const int pred = predict(one_sided, test.x[i]);
      if (test.y[i] == 1) {
        (pred == 1 ? r.tp : r.fn)++;
      } else {
        (pred == 0 ? r.tn : r.fp)++;
      }
    }
    report.entries.push_back({"one_sided_gyro", 0, r});
    if (!cfg.out_dir.empty()) {
      fs::create_directories(cfg.out_dir);
      save_one_sided_file(one_sided, (fs::path(cfg.out_dir) / "one_sided.txt").string());
    }
  });

  // ---- SDI-2: fusion threshold from the training halves ----
  const auto benign_train_pairs = even_half(traces.benign_pairs);
  const auto benign_eval_pairs = odd_half(traces.benign_pairs);
  const auto rocking_train_pairs = even_half(traces.rocking_pairs);
  const auto rocking_eval_pairs = odd_half(traces.rocking_pairs);
  const auto solenoid_train_pairs = even_half(traces.solenoid_pairs);
  const auto solenoid_eval_pairs = odd_half(traces.solenoid_pairs);
  const auto rolling_train_pairs = even_half(traces.rolling_pairs);
  const auto rolling_eval_pairs = odd_half(traces.rolling_pairs);

  const auto fusion_group = [&](const std::vector<std::pair<Trace, Trace>>& pairs) {
    return stage("fusion", [&] {
      return group_mse(pairs, cfg.fusion_grid_rate_hz, cfg.mse_window);
    });
  };
  const GroupMse benign_train_mse = fusion_group(benign_train_pairs);
  const GroupMse rocking_train_mse = fusion_group(rocking_train_pairs);
  const GroupMse solenoid_train_mse = fusion_group(solenoid_train_pairs);
  const GroupMse rolling_train_mse = fusion_group(rolling_train_pairs);

  std::vector<double> attack_train_values;
  for (const auto* g : {&rocking_train_mse, &solenoid_train_mse, &rolling_train_mse}) {
    attack_train_values.insert(attack_train_values.end(), g->all_values.begin(),
                               g->all_values.end());
  }
  const Stump stump = stage("fusion-threshold", [&] {
    return learn_threshold(benign_train_mse.all_values, attack_train_values);
  });
  report.fusion_threshold = stump.threshold;

  const GroupMse benign_eval_mse = fusion_group(benign_eval_pairs);
  const GroupMse rocking_eval_mse = fusion_group(rocking_eval_pairs);
  const GroupMse solenoid_eval_mse = fusion_group(solenoid_eval_pairs);
  const GroupMse rolling_eval_mse = fusion_group(rolling_eval_pairs);

  report.benign_mse = quantiles_of(benign_eval_mse.all_values);
  report.rocking_mse = quantiles_of(rocking_eval_mse.all_values);
  report.solenoid_mse = quantiles_of(solenoid_eval_mse.all_values);
  report.rolling_mse = quantiles_of(rolling_eval_mse.all_values);

  for (const int window_ms : cfg.windows_ms) {
    const double values_per_window =
        static_cast<double>(window_ms) * cfg.fusion_grid_rate_hz /
        (1000.0 * static_cast<double>(cfg.mse_window));
    const int verdict_window = std::max(1, static_cast<int>(std::floor(values_per_window)));
    FusionDetectorConfig det{stump.threshold, verdict_window, cfg.trip_fraction};

    EvalResult combined;
    eval_fusion_windowed(benign_eval_mse, 0, det, combined);
    eval_fusion_windowed(rocking_eval_mse, 1, det, combined);
    eval_fusion_windowed(solenoid_eval_mse, 1, det, combined);
    eval_fusion_windowed(rolling_eval_mse, 1, det, combined);
    report.entries.push_back({"sdi2_fusion", window_ms, combined});

    EvalResult rolling_only;
    eval_fusion_windowed(rolling_eval_mse, 1, det, rolling_only);
    report.entries.push_back({"sdi2_rolling_recall", window_ms, rolling_only});
  }

  // ---- SDI-1 cannot see rolling attacks: replayed traces look benign ----
  {
    EvalResult r;
    for (const Trace& g : firsts(rolling_eval_pairs)) {
      const int pred = predict(gyro_tree, features_for_trace(g, cfg.gyro_variant));
      (pred == 1 ? r.tp : r.fn)++;
    }
    report.entries.push_back({"sdi1_rolling_recall", 0, r});
  }

  // ---- ML on MSE features (5-fold and 10-fold) ----
  DecisionTree mse_tree;
  stage("mse-features", [&] {
    LearnDataset mse_ds;
    mse_ds.feature_names = feature_names(FeatureVariant::Full);
    auto add_rows = [&](const GroupMse& g, int label) {
      const auto w = static_cast<std::size_t>(cfg.mse_feature_window);
      for (const auto& stream : g.streams) {
        for (std::size_t s = 0; s + w <= stream.values.size(); s += w) {
          Window win;
          win.values.assign(stream.values.begin() + static_cast<std::ptrdiff_t>(s),
                            stream.values.begin() + static_cast<std::ptrdiff_t>(s + w));
          mse_ds.x.push_back(extract_features(win, FeatureVariant::Full).values);
          mse_ds.y.push_back(label);
        }
      }
    };
    add_rows(benign_train_mse, 0);
    add_rows(rocking_train_mse, 1);
    add_rows(solenoid_train_mse, 1);
    add_rows(rolling_train_mse, 1);

    report.entries.push_back(
        {"sdi2_mse_tree_5fold", 0,
         kfold_eval(mse_ds, 5, cfg.seed, tree_trainer(cfg.max_depth, cfg.min_leaf))});
    report.entries.push_back(
        {"sdi2_mse_tree_10fold", 0,
         kfold_eval(mse_ds, 10, cfg.seed, tree_trainer(cfg.max_depth, cfg.min_leaf))});
    mse_tree = train_tree(mse_ds, cfg.max_depth, cfg.min_leaf);
  });

  // ---- SDI-1 streaming detection, retrained per window length ----
  const auto gyro_train_stream =
      concat(firsts(benign_train_pairs), firsts(rocking_train_pairs));
  const auto gyro_eval_benign = firsts(benign_eval_pairs);
  const auto gyro_eval_rocking = firsts(rocking_eval_pairs);
  std::vector<DecisionTree> stream_trees;
  for (const int window_ms : cfg.windows_ms) {
    stage("sdi1-windowed", [&] {
      const LearnDataset window_ds =
          features_dataset(gyro_train_stream, cfg.realtime_variant, window_ms);
      const DecisionTree tree = train_tree(window_ds, cfg.max_depth, cfg.min_leaf);
      EvalResult r;
      eval_sdi1_windowed(gyro_eval_benign, 0, window_ms, tree, cfg.realtime_variant, r);
      eval_sdi1_windowed(gyro_eval_rocking, 1, window_ms, tree, cfg.realtime_variant, r);
      report.entries.push_back({"sdi1_gyro_windowed", window_ms, r});
      stream_trees.push_back(tree);
    });
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    save_tree_file(gyro_tree, (out / "tree_gyro.txt").string());
    save_tree_file(mag_tree, (out / "tree_mag.txt").string());
    save_stump_file(stump, (out / "fusion_stump.txt").string());
    save_tree_file(mse_tree, (out / "mse_tree.txt").string());
    for (std::size_t i = 0; i < stream_trees.size(); ++i) {
      save_tree_file(stream_trees[i],
                     (out / ("tree_gyro_w" + std::to_string(cfg.windows_ms[i]) + "ms.txt"))
                         .string());
    }
    write_report_csv(report, (out / "report.csv").string());
    write_report_text(report, (out / "report.txt").string());
  }

  return report;
}

void write_report_csv(const Report& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "type,name,window_ms,v1,v2,v3,v4,v5,v6\n";
  for (const auto& e : report.entries) {
    os << "eval," << e.defense << ',' << e.window_ms << ',' << e.cell.tp << ','
       << e.cell.tn << ',' << e.cell.fp << ',' << e.cell.fn << ','
       << format_double(e.cell.accuracy()) << ",\n";
  }
  auto mse_row = [&](const char* name, const Quantiles& q) {
    os << "mse_quantiles," << name << ",0," << format_double(q.min) << ','
       << format_double(q.p25) << ',' << format_double(q.median) << ','
       << format_double(q.p75) << ',' << format_double(q.p90) << ','
       << format_double(q.max) << '\n';
  };
  mse_row("benign", report.benign_mse);
  mse_row("rocking", report.rocking_mse);
  mse_row("solenoid", report.solenoid_mse);
  mse_row("rolling", report.rolling_mse);
  os << "threshold,fusion,0," << format_double(report.fusion_threshold)
     << ",,,,,\n";
  for (std::size_t i = 0; i < report.relieff_order.size(); ++i) {
    os << "relieff," << report.relieff_order[i] << ',' << (i + 1) << ','
       << format_double(report.relieff_weights[i]) << ",,,,,\n";
  }
}

Report read_report_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("type,name,window_ms", 0) != 0)
    throw DataError("bad report CSV header in " + path);

  Report report;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    cells.resize(9);
    const std::string& type = cells[0];
    if (type == "eval") {
      Report::Entry e;
      e.defense = cells[1];
      e.window_ms = std::stoi(cells[2]);
      e.cell.tp = std::stol(cells[3]);
      e.cell.tn = std::stol(cells[4]);
      e.cell.fp = std::stol(cells[5]);
      e.cell.fn = std::stol(cells[6]);
      report.entries.push_back(std::move(e));
    } else if (type == "mse_quantiles") {
      Quantiles q{std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5]),
                  std::stod(cells[6]), std::stod(cells[7]), std::stod(cells[8])};
      if (cells[1] == "benign") report.benign_mse = q;
      if (cells[1] == "rocking") report.rocking_mse = q;
      if (cells[1] == "solenoid") report.solenoid_mse = q;
      if (cells[1] == "rolling") report.rolling_mse = q;
    } else if (type == "threshold") {
      report.fusion_threshold = std::stod(cells[3]);
    } else if (type == "relieff") {
      report.relieff_order.push_back(cells[1]);
      report.relieff_weights.push_back(std::stod(cells[3]));
    }
  }
  return report;
}

namespace {

std::string pct(const EvalResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * r.accuracy());
  return buf;
}

} // namespace

void write_report_text(const Report& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);

  os << "Offline accuracy (k-fold cross validation)\n";
  os << "------------------------------------------\n";
  os << "defense                        accuracy (%)\n";
  auto offline_row = [&](const char* label, const std::string& defense, int w) {
    if (const auto* e = report.find(defense, w)) {
      os << label << pct(e->cell) << '\n';
    }
  };
  offline_row("tree, gyroscope                ", "sdi1_gyro_offline", 0);
  offline_row("tree, magnetometer             ", "sdi1_mag_offline", 0);
  offline_row("one-sided envelope, gyroscope  ", "one_sided_gyro", 0);
  offline_row("fusion MSE tree, 5-fold        ", "sdi2_mse_tree_5fold", 0);
  offline_row("fusion MSE tree, 10-fold       ", "sdi2_mse_tree_10fold", 0);

  os << "\nReal-time accuracy with different sampling windows\n";
  os << "---------------------------------------------------\n";
  os << "defense            window (s)   accuracy (%)\n";
  for (const auto& e : report.entries) {
    const char* label = nullptr;
    if (e.defense == "sdi1_gyro_windowed") label = "sdi1 gyroscope  ";
    if (e.defense == "sdi2_fusion") label = "sdi2 fusion     ";
    if (label == nullptr) continue;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%-12.3g", static_cast<double>(e.window_ms) / 1000.0);
    os << label << "   " << buf << ' ' << pct(e.cell) << '\n';
  }

  os << "\nFusion MSE summary (uT^2/s^2)\n";
  os << "-----------------------------\n";
  os << "group      min        p25        median     p75        p90        max\n";
  auto mse_row = [&](const char* name, const Quantiles& q) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-9s %-10.4g %-10.4g %-10.4g %-10.4g %-10.4g %-10.4g",
                  name, q.min, q.p25, q.median, q.p75, q.p90, q.max);
    os << buf << '\n';
  };
  mse_row("benign", report.benign_mse);
  mse_row("rocking", report.rocking_mse);
  mse_row("solenoid", report.solenoid_mse);
  mse_row("rolling", report.rolling_mse);
  os << "fusion threshold: " << format_double(report.fusion_threshold) << '\n';

  if (!report.relieff_order.empty()) {
    os << "\nFeature importance (gyroscope dataset)\n";
    os << "--------------------------------------\n";
    os << "rank  feature       weight\n";
    for (std::size_t i = 0; i < report.relieff_order.size(); ++i) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%-5zu %-13s %.4f", i + 1,
                    report.relieff_order[i].c_str(), report.relieff_weights[i]);
      os << buf << '\n';
    }
  }

  if (const auto* e = report.find("sdi1_rolling_recall", 0)) {
    os << "\nRolling-attack recall\n";
    os << "---------------------\n";
    const double sdi1 = e->cell.tp + e->cell.fn == 0
                            ? 0.0
                            : static_cast<double>(e->cell.tp) /
                                  static_cast<double>(e->cell.tp + e->cell.fn);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "sdi1 (single sensor): %.2f%%\n", 100.0 * sdi1);
    os << buf;
    for (const auto& entry : report.entries) {
      if (entry.defense != "sdi2_rolling_recall") continue;
      const long pos = entry.cell.tp + entry.cell.fn;
      const double recall =
          pos == 0 ? 0.0 : static_cast<double>(entry.cell.tp) / static_cast<double>(pos);
      std::snprintf(buf, sizeof(buf), "sdi2 fusion, %gs window: %.2f%%\n",
                    static_cast<double>(entry.window_ms) / 1000.0, 100.0 * recall);
      os << buf;
    }
  }
}

} // namespace sdi
