#include "sdi/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "sdi/errors.hpp"

namespace sdi {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_rect(const LearnDataset& ds) {
  if (ds.x.size() != ds.y.size())
    throw DataError("dataset rows and labels differ in length");
  for (const auto& row : ds.x) {
    if (row.size() != ds.arity()) throw DataError("ragged dataset rows");
  }
}

} // namespace

FeatureWeights relieff_rank(const LearnDataset& ds, int k) {
  check_rect(ds);
  const std::size_t n = ds.rows();
  const std::size_t f = ds.arity();
  if (n == 0 || f == 0) throw DataError("relieff on empty dataset");
  if (k < 1) throw UsageError("relieff neighbor count must be >= 1");

  std::size_t class_count[2] = {0, 0};
  for (const int y : ds.y) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    ++class_count[y];
  }
  for (const std::size_t c : class_count) {
    if (c < static_cast<std::size_t>(k) + 1)
      throw DataError("relieff needs at least k+1 rows per class");
  }

  // Min-max scale to [0,1] so per-feature diffs are comparable.
  std::vector<double> lo(f, 0.0), range(f, 0.0);
  for (std::size_t j = 0; j < f; ++j) {
    double mn = ds.x[0][j], mx = ds.x[0][j];
    for (std::size_t i = 1; i < n; ++i) {
      mn = std::min(mn, ds.x[i][j]);
      mx = std::max(mx, ds.x[i][j]);
    }
    lo[j] = mn;
    range[j] = mx - mn;
  }
  std::vector<std::vector<double>> xs(n, std::vector<double>(f, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      xs[i][j] = range[j] > 0.0 ? (ds.x[i][j] - lo[j]) / range[j] : 0.0;
    }
  }

  FeatureWeights out;
  out.w.assign(f, 0.0);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(k));

  std::vector<std::pair<double, std::size_t>> hits, misses;
  for (std::size_t i = 0; i < n; ++i) {
    hits.clear();
    misses.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::size_t t = 0; t < f; ++t) {
        const double d = xs[i][t] - xs[j][t];
        d2 += d * d;
      }
      (ds.y[j] == ds.y[i] ? hits : misses).emplace_back(d2, j);
    }
    auto by_distance_then_index = [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second < b.second;
    };
    std::partial_sort(hits.begin(), hits.begin() + k, hits.end(),
                      by_distance_then_index);
    std::partial_sort(misses.begin(), misses.begin() + k, misses.end(),
                      by_distance_then_index);

    for (int t = 0; t < k; ++t) {
      const auto& hit = xs[hits[static_cast<std::size_t>(t)].second];
      const auto& miss = xs[misses[static_cast<std::size_t>(t)].second];
      for (std::size_t j = 0; j < f; ++j) {
        out.w[j] += (std::fabs(xs[i][j] - miss[j]) - std::fabs(xs[i][j] - hit[j])) * scale;
      }
    }
  }
  return out;
}

std::vector<std::size_t> ranking(const FeatureWeights& w) {
  std::vector<std::size_t> idx(w.w.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return w.w[a] > w.w[b];
  });
  return idx;
}

namespace {

double gini(const std::size_t counts[2], std::size_t n) {
  const double p0 = static_cast<double>(counts[0]) / static_cast<double>(n);
  const double p1 = static_cast<double>(counts[1]) / static_cast<double>(n);
  return 1.0 - (p0 * p0 + p1 * p1);
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0; // weighted Gini impurity of the children
};

SplitChoice best_split(const LearnDataset& ds, const std::vector<std::size_t>& rows,
                       int min_leaf) {
  SplitChoice best;
  const std::size_t n = rows.size();
  std::vector<std::pair<double, int>> vals(n);

  for (std::size_t feat = 0; feat < ds.arity(); ++feat) {
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = {ds.x[rows[i]][feat], ds.y[rows[i]]};
    }
    std::sort(vals.begin(), vals.end());

    std::size_t left[2] = {0, 0};
    std::size_t total[2] = {0, 0};
    for (const auto& [v, y] : vals) ++total[y];

    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[vals[i].second];
      if (vals[i].first == vals[i + 1].first) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < static_cast<std::size_t>(min_leaf) ||
          nr < static_cast<std::size_t>(min_leaf))
        continue;
      const std::size_t right[2] = {total[0] - left[0], total[1] - left[1]};
      const double score = (static_cast<double>(nl) * gini(left, nl) +
                            static_cast<double>(nr) * gini(right, nr)) /
                           static_cast<double>(n);
      if (!best.found || score < best.score) {
        best.found = true;
        best.feature = static_cast<int>(feat);
        best.threshold = (vals[i].first + vals[i + 1].first) / 2.0;
        best.score = score;
      }
    }
  }
  return best;
}

int build_node(const LearnDataset& ds, std::vector<std::size_t> rows,
               int depth, int max_depth, int min_leaf, DecisionTree& tree) {
  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();

  std::size_t counts[2] = {0, 0};
  for (const std::size_t r : rows) ++counts[ds.y[r]];
  const std::size_t n = rows.size();

  auto make_leaf = [&] {
    TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.leaf_class = counts[1] > counts[0] ? 1 : 0; // tie -> lower class
    node.p0 = static_cast<double>(counts[0]) / static_cast<double>(n);
    node.p1 = static_cast<double>(counts[1]) / static_cast<double>(n);
  };

  if (counts[0] == 0 || counts[1] == 0 || depth >= max_depth) {
    make_leaf();
    return id;
  }
  const SplitChoice split = best_split(ds, rows, min_leaf);
  if (!split.found) {
    make_leaf();
    return id;
  }

  std::vector<std::size_t> lrows, rrows;
  for (const std::size_t r : rows) {
    (ds.x[r][static_cast<std::size_t>(split.feature)] <= split.threshold ? lrows
                                                                         : rrows)
        .push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  {
    TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.p0 = static_cast<double>(counts[0]) / static_cast<double>(n);
    node.p1 = static_cast<double>(counts[1]) / static_cast<double>(n);
  }
  const int left = build_node(ds, std::move(lrows), depth + 1, max_depth, min_leaf, tree);
  const int right = build_node(ds, std::move(rrows), depth + 1, max_depth, min_leaf, tree);
  tree.nodes[static_cast<std::size_t>(id)].left = left;
  tree.nodes[static_cast<std::size_t>(id)].right = right;
  return id;
}

} // namespace

DecisionTree train_tree(const LearnDataset& ds, int max_depth, int min_leaf) {
  check_rect(ds);
  if (ds.rows() == 0) throw DataError("cannot train on an empty dataset");
  if (max_depth < 1) throw UsageError("max_depth must be >= 1");
  if (min_leaf < 1) throw UsageError("min_leaf must be >= 1");

  bool has[2] = {false, false};
  for (const int y : ds.y) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    has[y] = true;
  }
  if (!has[0] || !has[1]) throw DataError("missing class: training needs both labels");

  DecisionTree tree;
  tree.max_depth = max_depth;
  tree.min_leaf = min_leaf;
  tree.arity = ds.arity();

  std::vector<std::size_t> rows(ds.rows());
  std::iota(rows.begin(), rows.end(), 0);
  build_node(ds, std::move(rows), 0, max_depth, min_leaf, tree);
  return tree;
}

int predict(const DecisionTree& tree, const std::vector<double>& fv) {
  if (tree.nodes.empty()) throw DataError("empty tree");
  if (fv.size() < tree.arity) throw DataError("feature vector arity mismatch");
  int id = 0;
  for (;;) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.is_leaf()) return node.leaf_class;
    id = fv[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                      : node.right;
  }
}

int predict(const DecisionTree& tree, const FeatureVector& fv) {
  return predict(tree, fv.values);
}

int predict(const Stump& stump, double value) {
  return value > stump.threshold ? 1 : 0;
}

OneSidedModel train_one_sided(const LearnDataset& benign_only, double quantile) {
  check_rect(benign_only);
  const std::size_t n = benign_only.rows();
  if (n < 10) throw DataError("one-sided training needs at least 10 benign rows");
  if (!(quantile > 0.0 && quantile <= 1.0))
    throw UsageError("quantile must be in (0,1]");
  for (const int y : benign_only.y) {
    if (y != 0) throw DataError("one-sided training data must be all benign");
  }

  const std::size_t f = benign_only.arity();
  OneSidedModel model;
  model.quantile = quantile;
  model.mu.assign(f, 0.0);
  model.var.assign(f, 0.0);

  for (const auto& row : benign_only.x) {
    for (std::size_t j = 0; j < f; ++j) model.mu[j] += row[j];
  }
  for (auto& m : model.mu) m /= static_cast<double>(n);

  double max_var = 0.0;
  for (const auto& row : benign_only.x) {
    for (std::size_t j = 0; j < f; ++j) {
      const double d = row[j] - model.mu[j];
      model.var[j] += d * d;
    }
  }
  for (auto& v : model.var) {
    v /= static_cast<double>(n);
    max_var = std::max(max_var, v);
    v += 1e-9;
  }
  if (max_var == 0.0)
    throw DataError("one-sided training data is degenerate (all rows identical)");

  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = mahalanobis(model, benign_only.x[i]);
  std::sort(dist.begin(), dist.end());
  const auto kth = static_cast<std::size_t>(
      std::ceil(quantile * static_cast<double>(n)));
  model.tau = dist[std::min(kth, n) - 1];
  return model;
}

double mahalanobis(const OneSidedModel& model, const std::vector<double>& fv) {
  if (fv.size() != model.mu.size()) throw DataError("feature vector arity mismatch");
  double d2 = 0.0;
  for (std::size_t j = 0; j < fv.size(); ++j) {
    const double d = fv[j] - model.mu[j];
    d2 += d * d / model.var[j];
  }
  return std::sqrt(d2);
}

int predict(const OneSidedModel& model, const std::vector<double>& fv) {
  return mahalanobis(model, fv) > model.tau ? 1 : 0;
}

EvalResult kfold_eval(const LearnDataset& ds, int k, std::uint64_t seed,
                      const Trainer& trainer) {
  check_rect(ds);
  if (k < 2) throw UsageError("k-fold needs k >= 2");
  if (static_cast<std::size_t>(k) > ds.rows())
    throw UsageError("k exceeds the number of rows");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (ds.y[i] != 0 && ds.y[i] != 1) throw DataError("labels must be 0 or 1");
    by_class[ds.y[i]].push_back(i);
  }
  for (const auto& cls : by_class) {
    if (!cls.empty() && cls.size() < static_cast<std::size_t>(k))
      throw UsageError("k exceeds the smaller class count");
  }

  // Round-robin per class with a running offset, so the remainder rows of
  // different classes land on different folds: fold sizes differ by at most
  // one row overall as well as per class.
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(ds.rows(), 0);
  std::size_t start = 0;
  for (auto& cls : by_class) {
    std::shuffle(cls.begin(), cls.end(), rng);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      fold_of[cls[i]] = static_cast<int>((start + i) % static_cast<std::size_t>(k));
    }
    start = (start + cls.size()) % static_cast<std::size_t>(k);
  }

  EvalResult result;
  for (int fold = 0; fold < k; ++fold) {
    LearnDataset train;
    train.feature_names = ds.feature_names;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      if (fold_of[i] == fold) {
        test_rows.push_back(i);
      } else {
        train.x.push_back(ds.x[i]);
        train.y.push_back(ds.y[i]);
      }
    }
    const auto classify = trainer(train);
    for (const std::size_t i : test_rows) {
      const int pred = classify(ds.x[i]);
      if (ds.y[i] == 1) {
        (pred == 1 ? result.tp : result.fn)++;
      } else {
        (pred == 0 ? result.tn : result.fp)++;
      }
    }
  }
  return result;
}

Trainer tree_trainer(int max_depth, int min_leaf) {
  return [max_depth, min_leaf](const LearnDataset& train) {
    auto tree = std::make_shared<DecisionTree>(train_tree(train, max_depth, min_leaf));
    return [tree](const std::vector<double>& fv) { return predict(*tree, fv); };
  };
}

std::vector<WindowVerdict> windowed_detect(const Trace& stream,
                                           std::int64_t window_ms,
                                           const DecisionTree& model,
                                           FeatureVariant variant,
                                           DetectionStats* stats) {
  if (stream.samples.empty()) throw DataError("cannot detect on an empty stream");
  if (window_ms < 1) throw UsageError("window must be at least 1 ms");

  const std::int64_t window_ns = window_ms * 1'000'000;
  const std::int64_t t0 = stream.start_ns();
  const std::int64_t t_end = stream.end_ns();
  const std::size_t min_samples = variant == FeatureVariant::Full ? 4 : 2;

  std::vector<WindowVerdict> verdicts;
  DetectionStats local;
  std::size_t cursor = 0;

  for (std::int64_t ws = t0; ws + window_ns <= t_end; ws += window_ns) {
    const std::int64_t we = ws + window_ns;
    Trace chunk;
    chunk.sensor = stream.sensor;
    chunk.nominal_rate_hz = stream.nominal_rate_hz;
    while (cursor < stream.samples.size() && stream.samples[cursor].t_ns < we) {
      chunk.samples.push_back(stream.samples[cursor]);
      ++cursor;
    }
    if (chunk.samples.size() < min_samples) {
      ++local.dropped_partial;
      continue;
    }
    const FeatureVector fv = features_for_trace(chunk, variant);
    verdicts.push_back({ws, predict(model, fv)});
    ++local.windows;
  }
  if (cursor < stream.samples.size()) ++local.dropped_partial;

  if (stats != nullptr) *stats = local;
  return verdicts;
}

// -------- model text I/O --------

void save_tree(const DecisionTree& tree, std::ostream& os) {
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& n = tree.nodes[id];
    if (n.is_leaf()) {
      os << "node " << id << " leaf " << n.leaf_class << ' ' << fmt_double(n.p0)
         << ' ' << fmt_double(n.p1) << '\n';
    } else {
      os << "node " << id << " split " << n.feature << ' '
         << fmt_double(n.threshold) << ' ' << n.left << ' ' << n.right << '\n';
    }
  }
}

DecisionTree load_tree(std::istream& is) {
  DecisionTree tree;
  std::string line;
  int max_feature = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag, kind;
    std::size_t id = 0;
    if (!(ls >> tag >> id >> kind) || tag != "node")
      throw DataError("malformed tree model line: " + line);
    if (id != tree.nodes.size())
      throw DataError("tree model node ids must be sequential");
    TreeNode n;
    if (kind == "split") {
      if (!(ls >> n.feature >> n.threshold >> n.left >> n.right))
        throw DataError("malformed split line: " + line);
      max_feature = std::max(max_feature, n.feature);
    } else if (kind == "leaf") {
      if (!(ls >> n.leaf_class >> n.p0 >> n.p1))
        throw DataError("malformed leaf line: " + line);
    } else {
      throw DataError("unknown tree node kind: " + kind);
    }
    tree.nodes.push_back(n);
  }
  if (tree.nodes.empty()) throw DataError("empty tree model");
  tree.arity = static_cast<std::size_t>(max_feature + 1);
  return tree;
}

void save_stump(const Stump& stump, std::ostream& os) {
  os << "feature_index=" << stump.feature_index << '\n'
     << "threshold=" << fmt_double(stump.threshold) << '\n'
     << "polarity=above_attack\n";
}

Stump load_stump(std::istream& is) {
  Stump stump;
  std::string line;
  bool have_threshold = false;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "feature_index") stump.feature_index = std::stoi(value);
    if (key == "threshold") {
      stump.threshold = std::stod(value);
      have_threshold = true;
    }
  }
  if (!have_threshold) throw DataError("stump model missing threshold");
  return stump;
}

namespace {

std::vector<double> parse_doubles(const std::string& s) {
  std::istringstream is(s);
  std::vector<double> out;
  double v = 0.0;
  while (is >> v) out.push_back(v);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += fmt_double(v[i]);
  }
  return out;
}

} // namespace

void save_one_sided(const OneSidedModel& model, std::ostream& os) {
  os << "arity=" << model.mu.size() << '\n'
     << "quantile=" << fmt_double(model.quantile) << '\n'
     << "tau=" << fmt_double(model.tau) << '\n'
     << "mu=" << join_doubles(model.mu) << '\n'
     << "var=" << join_doubles(model.var) << '\n';
}

OneSidedModel load_one_sided(std::istream& is) {
  OneSidedModel model;
  std::string line;
  std::size_t arity = 0;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "arity") arity = static_cast<std::size_t>(std::stoul(value));
    if (key == "quantile") model.quantile = std::stod(value);
    if (key == "tau") model.tau = std::stod(value);
    if (key == "mu") model.mu = parse_doubles(value);
    if (key == "var") model.var = parse_doubles(value);
  }
  if (model.mu.size() != arity || model.var.size() != arity || arity == 0)
    throw DataError("malformed one-sided model");
  return model;
}

namespace {

template <typename T, typename SaveFn>
void save_to_file(const T& model, const std::string& path, SaveFn fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  fn(model, os);
}

template <typename LoadFn>
auto load_from_file(const std::string& path, LoadFn fn) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open for reading: " + path);
  return fn(is);
}

} // namespace

void save_tree_file(const DecisionTree& tree, const std::string& path) {
  save_to_file(tree, path, [](const DecisionTree& t, std::ostream& os) { save_tree(t, os); });
}

DecisionTree load_tree_file(const std::string& path) {
  return load_from_file(path, [](std::istream& is) { return load_tree(is); });
}

void save_stump_file(const Stump& stump, const std::string& path) {
  save_to_file(stump, path, [](const Stump& s, std::ostream& os) { save_stump(s, os); });
}

Stump load_stump_file(const std::string& path) {
  return load_from_file(path, [](std::istream& is) { return load_stump(is); });
}

void save_one_sided_file(const OneSidedModel& model, const std::string& path) {
  save_to_file(model, path,
               [](const OneSidedModel& m, std::ostream& os) { save_one_sided(m, os); });
}

OneSidedModel load_one_sided_file(const std::string& path) {
  return load_from_file(path, [](std::istream& is) { return load_one_sided(is); });
}

} // namespace sdi
