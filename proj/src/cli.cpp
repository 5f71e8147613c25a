#include "sdi/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdi/doppler.hpp"
#include "sdi/errors.hpp"
#include "sdi/experiment.hpp"
#include "sdi/io.hpp"

namespace sdi::cli {

namespace fs = std::filesystem;

namespace {

struct SimArgs {
  std::string profile = "walking";
  int n = 1;
  std::uint64_t seed = 0;
  std::string out;
  double duration_s = 10.0;
  std::string attack = "none";
  bool dataset = false;
  int k = 1;
  int per_activity = -1; // -1: derive from k
  int per_rocking = -1;
  int solenoid = -1;
  int rolling = -1;
  double jitter_ms = 0.0;
  double gyro_noise = 0.005;
  double mag_noise = 0.1;
};

void store_pair(const std::pair<Trace, Trace>& pair, const std::string& dir,
                int& index, std::vector<ManifestEntry>& manifest) {
  char name[64];
  std::snprintf(name, sizeof(name), "t%05d_%s.csv", index++, to_string(pair.first.sensor));
  manifest.push_back(store_trace(pair.first, dir, name));
  std::snprintf(name, sizeof(name), "t%05d_%s.csv", index++, to_string(pair.second.sensor));
  manifest.push_back(store_trace(pair.second, dir, name));
}

int cmd_sim(const SimArgs& args) {
  std::vector<ManifestEntry> manifest;
  int index = 0;

  if (args.dataset) {
    DatasetConfig cfg;
    cfg.per_activity = args.per_activity >= 0 ? args.per_activity : 100 * args.k;
    cfg.per_rocking_variant = args.per_rocking >= 0 ? args.per_rocking : 250 * args.k;
    cfg.solenoid_traces = args.solenoid >= 0 ? args.solenoid : 500 * args.k;
    cfg.rolling_pairs = args.rolling >= 0 ? args.rolling : 500 * args.k;
    cfg.duration_s = args.duration_s;
    cfg.seed = args.seed;
    cfg.gyro_noise_std = args.gyro_noise;
    cfg.env.sensor_noise_std = args.mag_noise;
    cfg.jitter_ns = static_cast<std::int64_t>(args.jitter_ms * 1e6);
    const TraceDataset ds = generate_dataset(cfg);
    for (const auto* group :
         {&ds.benign_pairs, &ds.rocking_pairs, &ds.solenoid_pairs, &ds.rolling_pairs}) {
      for (const auto& pair : *group) store_pair(pair, args.out, index, manifest);
    }
  } else {
    const Activity activity = activity_from_string(args.profile);
    MagneticEnvironment env;
    env.sensor_noise_std = args.mag_noise;
    std::vector<std::pair<Trace, Trace>> sessions;
    const int n_sessions = args.attack == "rolling" ? std::max(args.n, 2) : args.n;
    for (int i = 0; i < n_sessions; ++i) {
      const std::uint64_t seed = args.seed * 1000003ULL + static_cast<std::uint64_t>(i);
      MotionProfile profile = default_profile(activity, seed);
      profile.gyro_noise_std = args.gyro_noise;
      profile.jitter_ns = static_cast<std::int64_t>(args.jitter_ms * 1e6);
      auto pair = simulate_benign_pair(profile, env, args.duration_s, seed);

      if (args.attack == "rocking_sine" || args.attack == "rocking_noise") {
        AttackConfig ac;
        ac.waveform = args.attack == "rocking_sine" ? RockingWaveform::Sine
                                                    : RockingWaveform::UniformNoise;
        ac.seed = seed;
        pair.first = apply_rocking_attack(pair.first, ac);
      } else if (args.attack == "solenoid") {
        SolenoidConfig sc;
        sc.seed = seed;
        pair.second = apply_solenoid_attack(pair.second, sc);
      } else if (args.attack != "none" && args.attack != "rolling") {
        throw UsageError("unknown attack: " + args.attack);
      }
      sessions.push_back(std::move(pair));
    }

    if (args.attack == "rolling") {
      std::vector<Trace> gyro_pool, mag_pool;
      for (const auto& [g, m] : sessions) {
        gyro_pool.push_back(g);
        mag_pool.push_back(m);
      }
      for (int i = 0; i < args.n; ++i) {
        const auto pair = make_rolling_pair(
            gyro_pool, mag_pool, args.seed * 7919ULL + static_cast<std::uint64_t>(i));
        store_pair(pair, args.out, index, manifest);
      }
    } else {
      for (const auto& pair : sessions) store_pair(pair, args.out, index, manifest);
    }
  }

  write_manifest(manifest, (fs::path(args.out) / "manifest.jsonl").string());
  std::cout << "wrote " << manifest.size() << " traces to " << args.out << '\n';
  return 0;
}

int cmd_features(const std::string& in_dir, const std::string& variant_name,
                 int window_ms, const std::string& sensor_name,
                 const std::string& labels_csv, const std::string& out) {
  const FeatureVariant variant = variant_from_string(variant_name);
  const SensorKind sensor = sensor_from_string(sensor_name);

  std::vector<Label> keep;
  if (!labels_csv.empty()) {
    std::istringstream ls(labels_csv);
    std::string item;
    while (std::getline(ls, item, ',')) keep.push_back(label_from_string(item));
  }

  std::vector<Trace> selected;
  for (auto& trace : load_trace_dir(in_dir)) {
    if (trace.sensor != sensor) continue;
    if (!keep.empty() &&
        std::find(keep.begin(), keep.end(), trace.label) == keep.end())
      continue;
    selected.push_back(std::move(trace));
  }
  if (selected.empty()) throw DataError("no traces match the sensor/label filter");

  const LearnDataset ds = features_dataset(selected, variant, window_ms);
  write_features_csv(ds, out);
  std::cout << "wrote " << ds.rows() << " feature rows to " << out << '\n';
  return 0;
}

int cmd_train(const std::string& features_path, const std::string& model,
              int max_depth, int min_leaf, double quantile,
              const std::string& out) {
  const LearnDataset ds = read_features_csv(features_path);
  if (model == "tree") {
    save_tree_file(train_tree(ds, max_depth, min_leaf), out);
  } else if (model == "one_sided") {
    LearnDataset benign;
    benign.feature_names = ds.feature_names;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      if (ds.y[i] == 0) {
        benign.x.push_back(ds.x[i]);
        benign.y.push_back(0);
      }
    }
    save_one_sided_file(train_one_sided(benign, quantile), out);
  } else if (model == "stump") {
    if (ds.arity() != 1)
      throw DataError("stump training expects a single-feature table");
    std::vector<double> benign, attack;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      (ds.y[i] == 0 ? benign : attack).push_back(ds.x[i][0]);
    }
    save_stump_file(learn_threshold(benign, attack), out);
  } else {
    throw UsageError("unknown model kind: " + model);
  }
  std::cout << "wrote model to " << out << '\n';
  return 0;
}

int cmd_eval(const std::string& features_path, int kfold, int max_depth,
             int min_leaf, std::uint64_t seed, const std::string& out) {
  const LearnDataset ds = read_features_csv(features_path);
  const EvalResult r = kfold_eval(ds, kfold, seed, tree_trainer(max_depth, min_leaf));
  std::cout << "kfold=" << kfold << " tp=" << r.tp << " tn=" << r.tn
            << " fp=" << r.fp << " fn=" << r.fn << " accuracy="
            << format_double(r.accuracy()) << '\n';
  if (!out.empty()) {
    Report report;
    report.entries.push_back({"tree_kfold", 0, r});
    write_report_csv(report, out);
  }
  return 0;
}

int cmd_detect(const std::string& model_path, const std::string& in_csv,
               const std::string& variant_name, int window_ms, double rate_hz,
               const std::string& out) {
  const DecisionTree tree = load_tree_file(model_path);
  Trace trace = read_trace_csv(in_csv);
  trace.nominal_rate_hz = rate_hz;
  DetectionStats stats;
  const auto verdicts = windowed_detect(trace, window_ms, tree,
                                        variant_from_string(variant_name), &stats);
  write_verdicts_csv(verdicts, out);
  std::cout << stats.windows << " windows, " << stats.dropped_partial
            << " dropped partial\n";
  return 0;
}

int cmd_fuse(const std::string& gyro_csv, const std::string& mag_csv,
             double grid_rate, int mse_window, int window,
             const std::string& stump_path, double trip,
             const std::string& out) {
  Trace gyro = read_trace_csv(gyro_csv);
  gyro.sensor = SensorKind::Gyroscope;
  Trace mag = read_trace_csv(mag_csv);
  mag.sensor = SensorKind::Magnetometer;

  const Stump stump = load_stump_file(stump_path);
  const FusionSeries fs = build_fusion_series(gyro, mag, grid_rate);
  const MseStream stream = mse(fs, mse_window);
  FusionDetectorConfig cfg{stump.threshold, window, trip};
  const auto verdicts = windowed_fusion_detect(stream, cfg);

  std::vector<FusionVerdictRow> rows;
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    double mean = 0.0;
    for (std::size_t j = i * w; j < (i + 1) * w; ++j) mean += stream.values[j];
    rows.push_back({verdicts[i].window_start_ns, mean / static_cast<double>(w),
                    verdicts[i].verdict});
  }
  write_fusion_verdicts_csv(rows, out);
  std::cout << rows.size() << " verdict windows\n";
  return 0;
}

int cmd_doppler_demo(double f0, const std::string& motion_spec, double duration,
                     double rate, double noise_std, std::uint64_t seed,
                     const std::string& out) {
  RadarConfig cfg;
  cfg.f0 = f0;
  cfg.sample_rate_hz = rate;

  RadialMotion motion;
  {
    std::istringstream ms(motion_spec);
    std::string kind, a, b;
    std::getline(ms, kind, ':');
    std::getline(ms, a, ':');
    std::getline(ms, b, ':');
    auto num = [](std::string s) {
      while (!s.empty() && std::isalpha(static_cast<unsigned char>(s.back())))
        s.pop_back();
      return std::stod(s);
    };
    if (kind == "sine") {
      motion = sinusoidal_motion(num(b), num(a), duration, rate);
    } else if (kind == "const") {
      motion = constant_velocity_motion(num(a), duration, rate);
    } else {
      throw UsageError("motion spec must be sine:<freq>hz:<amp>m or const:<v>mps");
    }
  }

  const BasebandSignal bb = synthesize_baseband_analytic(cfg, motion, noise_std, seed);
  const auto phase = extract_phase(bb);
  const auto recovered_r = displacement_from_phase(phase, cfg);
  const auto recovered_a = reconstruct_acceleration(phase, cfg);

  std::ofstream os(out, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + out);
  os << "t_ns,true_r,recovered_r,true_a,recovered_a,residual\n";
  for (std::size_t i = 0; i < motion.r.size(); ++i) {
    const auto t_ns = static_cast<std::int64_t>(
        std::llround(static_cast<double>(i) / rate * 1e9));
    os << t_ns << ',' << format_double(motion.r[i]) << ','
       << format_double(recovered_r[i]) << ',' << format_double(motion.a[i])
       << ',' << format_double(recovered_a[i]) << ','
       << format_double(recovered_r[i] - motion.r[i]) << '\n';
  }
  std::cout << "wrote " << motion.r.size() << " rows to " << out << '\n';
  return 0;
}

int cmd_report(const std::string& in_csv, const std::string& out) {
  const Report report = read_report_csv(in_csv);
  if (out.empty()) {
    const std::string tmp = (fs::temp_directory_path() / "sdi_report.txt").string();
    write_report_text(report, tmp);
    std::ifstream is(tmp);
    std::cout << is.rdbuf();
  } else {
    write_report_text(report, out);
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out,
                   std::uint64_t seed, bool seed_given) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_experiment_config(config_path);
  if (!out.empty()) cfg.out_dir = out;
  if (seed_given) cfg.seed = seed;

  const Report report = run_experiment(cfg);
  for (const auto& e : report.entries) {
    std::cout << e.defense;
    if (e.window_ms > 0) std::cout << " @" << e.window_ms << "ms";
    std::cout << ": accuracy " << format_double(e.cell.accuracy()) << " (tp=" << e.cell.tp
              << " tn=" << e.cell.tn << " fp=" << e.cell.fp << " fn=" << e.cell.fn
              << ")\n";
  }
  std::cout << "fusion threshold: " << format_double(report.fusion_threshold) << '\n';
  std::cout << "runtime: " << format_double(report.runtime_seconds) << " s\n";
  if (!cfg.out_dir.empty()) std::cout << "artifacts in " << cfg.out_dir << '\n';
  return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"sensor spoofing detection toolkit"};
  app.require_subcommand(1);

  // ---- sim ----
  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "generate simulated sensor traces");
  sim_cmd->add_option("--profile", sim.profile, "activity profile");
  sim_cmd->add_option("--n", sim.n, "number of sessions")->check(CLI::Range(1, 1000000));
  sim_cmd->add_option("--seed", sim.seed, "random seed");
  sim_cmd->add_option("--out", sim.out, "output directory")->required();
  sim_cmd->add_option("--duration", sim.duration_s, "trace duration seconds");
  sim_cmd->add_option("--attack", sim.attack,
                      "none|rocking_sine|rocking_noise|solenoid|rolling");
  sim_cmd->add_flag("--dataset", sim.dataset, "emit the full shaped dataset");
  sim_cmd->add_option("--k", sim.k, "dataset scale factor")->check(CLI::Range(1, 100));
  sim_cmd->add_option("--per-activity", sim.per_activity, "dataset: benign sessions per activity");
  sim_cmd->add_option("--per-rocking", sim.per_rocking, "dataset: traces per rocking waveform");
  sim_cmd->add_option("--solenoid", sim.solenoid, "dataset: magnetometer attack traces");
  sim_cmd->add_option("--rolling", sim.rolling, "dataset: rolling pairs");
  sim_cmd->add_option("--jitter-ms", sim.jitter_ms, "timestamp jitter, ms");
  sim_cmd->add_option("--noise-gyro", sim.gyro_noise, "gyro noise std, rad/s");
  sim_cmd->add_option("--noise-mag", sim.mag_noise, "mag noise std, uT");

  // ---- features ----
  std::string f_in, f_variant = "full", f_sensor = "gyroscope", f_labels, f_out;
  int f_window_ms = 0;
  std::uint64_t f_seed = 0;
  auto* feat_cmd = app.add_subcommand("features", "extract feature tables from traces");
  feat_cmd->add_option("--in", f_in, "trace directory with manifest.jsonl")->required();
  feat_cmd->add_option("--variant", f_variant, "full|per_axis6|iot5");
  feat_cmd->add_option("--window-ms", f_window_ms, "window length, 0 = whole trace");
  feat_cmd->add_option("--sensor", f_sensor, "sensor to select");
  feat_cmd->add_option("--labels", f_labels, "comma list of labels to keep");
  feat_cmd->add_option("--seed", f_seed, "unused; accepted for uniformity");
  feat_cmd->add_option("--out", f_out, "output CSV")->required();

  // ---- train ----
  std::string t_features, t_model = "tree", t_out;
  int t_max_depth = 8, t_min_leaf = 5;
  double t_quantile = 0.99;
  std::uint64_t t_seed = 0;
  auto* train_cmd = app.add_subcommand("train", "train a model from a feature table");
  train_cmd->add_option("--features", t_features, "feature CSV")->required();
  train_cmd->add_option("--model", t_model, "tree|one_sided|stump");
  train_cmd->add_option("--max-depth", t_max_depth, "tree depth cap");
  train_cmd->add_option("--min-leaf", t_min_leaf, "minimum rows per leaf");
  train_cmd->add_option("--quantile", t_quantile, "one-sided distance quantile");
  train_cmd->add_option("--seed", t_seed, "unused; accepted for uniformity");
  train_cmd->add_option("--out", t_out, "model file")->required();

  // ---- eval ----
  std::string e_features, e_out;
  int e_kfold = 10, e_max_depth = 8, e_min_leaf = 5;
  std::uint64_t e_seed = 0;
  auto* eval_cmd = app.add_subcommand("eval", "k-fold cross validation of a tree");
  eval_cmd->add_option("--features", e_features, "feature CSV")->required();
  eval_cmd->add_option("--kfold", e_kfold, "fold count")->check(CLI::Range(2, 100));
  eval_cmd->add_option("--max-depth", e_max_depth, "tree depth cap");
  eval_cmd->add_option("--min-leaf", e_min_leaf, "minimum rows per leaf");
  eval_cmd->add_option("--seed", e_seed, "shuffle seed");
  eval_cmd->add_option("--out", e_out, "report CSV");

  // ---- detect ----
  std::string d_model, d_in, d_variant = "per_axis6", d_out;
  int d_window_ms = 1000;
  double d_rate = 200.0;
  std::uint64_t d_seed = 0;
  auto* detect_cmd = app.add_subcommand("detect", "windowed SDI-1 detection on a stream");
  detect_cmd->add_option("--model", d_model, "tree model file")->required();
  detect_cmd->add_option("--in", d_in, "trace CSV")->required();
  detect_cmd->add_option("--variant", d_variant, "feature variant");
  detect_cmd->add_option("--window-ms", d_window_ms, "window length");
  detect_cmd->add_option("--rate", d_rate, "stream rate, Hz");
  detect_cmd->add_option("--seed", d_seed, "unused; accepted for uniformity");
  detect_cmd->add_option("--out", d_out, "verdict CSV")->required();

  // ---- fuse ----
  std::string fu_gyro, fu_mag, fu_model, fu_out;
  double fu_grid = 100.0, fu_trip = 0.8;
  int fu_mse_window = 50, fu_window = 2;
  std::uint64_t fu_seed = 0;
  auto* fuse_cmd = app.add_subcommand("fuse", "gyroscope-magnetometer fusion detection");
  fuse_cmd->add_option("--gyro", fu_gyro, "gyroscope trace CSV")->required();
  fuse_cmd->add_option("--mag", fu_mag, "magnetometer trace CSV")->required();
  fuse_cmd->add_option("--grid-rate", fu_grid, "alignment grid rate, Hz");
  fuse_cmd->add_option("--mse-window", fu_mse_window, "samples per MSE value");
  fuse_cmd->add_option("--window", fu_window, "MSE values per verdict window");
  fuse_cmd->add_option("--threshold-model", fu_model, "stump model file")->required();
  fuse_cmd->add_option("--trip", fu_trip, "trip fraction");
  fuse_cmd->add_option("--seed", fu_seed, "unused; accepted for uniformity");
  fuse_cmd->add_option("--out", fu_out, "verdict CSV")->required();

  // ---- doppler-demo ----
  std::string dd_motion = "sine:1hz:0.05m", dd_out;
  double dd_f0 = 2.4e9, dd_duration = 10.0, dd_rate = 1000.0, dd_noise = 0.0;
  std::uint64_t dd_seed = 0;
  auto* doppler_cmd = app.add_subcommand("doppler-demo",
                                         "radar phase/acceleration recovery demo");
  doppler_cmd->add_option("--f0", dd_f0, "carrier frequency, Hz");
  doppler_cmd->add_option("--motion", dd_motion, "sine:<f>hz:<amp>m or const:<v>mps");
  doppler_cmd->add_option("--duration", dd_duration, "seconds");
  doppler_cmd->add_option("--rate", dd_rate, "baseband rate, Hz");
  doppler_cmd->add_option("--noise", dd_noise, "baseband noise std");
  doppler_cmd->add_option("--seed", dd_seed, "noise seed");
  doppler_cmd->add_option("--out", dd_out, "report CSV")->required();

  // ---- report ----
  std::string r_in, r_out;
  std::uint64_t r_seed = 0;
  auto* report_cmd = app.add_subcommand("report", "render a report CSV as text");
  report_cmd->add_option("--in", r_in, "report CSV")->required();
  report_cmd->add_option("--seed", r_seed, "unused; accepted for uniformity");
  report_cmd->add_option("--out", r_out, "text output, stdout when omitted");

  // ---- experiment ----
  std::string x_config, x_out;
  std::uint64_t x_seed = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "run the end-to-end experiment");
  exp_cmd->add_option("--config", x_config, "key=value config file");
  exp_cmd->add_option("--out", x_out, "artifact directory");
  auto* seed_opt = exp_cmd->add_option("--seed", x_seed, "experiment seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (sim_cmd->parsed()) return cmd_sim(sim);
    if (feat_cmd->parsed())
      return cmd_features(f_in, f_variant, f_window_ms, f_sensor, f_labels, f_out);
    if (train_cmd->parsed())
      return cmd_train(t_features, t_model, t_max_depth, t_min_leaf, t_quantile, t_out);
    if (eval_cmd->parsed())
      return cmd_eval(e_features, e_kfold, e_max_depth, e_min_leaf, e_seed, e_out);
    if (detect_cmd->parsed())
      return cmd_detect(d_model, d_in, d_variant, d_window_ms, d_rate, d_out);
    if (fuse_cmd->parsed())
      return cmd_fuse(fu_gyro, fu_mag, fu_grid, fu_mse_window, fu_window, fu_model,
                      fu_trip, fu_out);
    if (doppler_cmd->parsed())
      return cmd_doppler_demo(dd_f0, dd_motion, dd_duration, dd_rate, dd_noise,
                              dd_seed, dd_out);
    if (report_cmd->parsed()) return cmd_report(r_in, r_out);
    if (exp_cmd->parsed())
      return cmd_experiment(x_config, x_out, x_seed, seed_opt->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("sdi");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace sdi::cli
