#ifndef SDI_LEARN_HPP_
#define SDI_LEARN_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdi/features.hpp"
#include "sdi/trace.hpp"

namespace sdi {

// Labeled feature rows; label 0 = benign, 1 = attack.
struct LearnDataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return x.size(); }
  std::size_t arity() const { return x.empty() ? 0 : x.front().size(); }
};

struct FeatureWeights {
  std::vector<double> w;
};

// Classic ReliefF with m = N (every instance sampled once) and k nearest
// hits/misses by Euclidean distance on min-max scaled features. Requires at
// least k+1 rows per class.
FeatureWeights relieff_rank(const LearnDataset& ds, int k);

// Indices of features ordered by descending weight (ties by lower index).
std::vector<std::size_t> ranking(const FeatureWeights& w);

struct TreeNode {
  int feature = -1;        // -1 for leaves
  double threshold = 0.0;  // value <= threshold goes left
  int left = -1;
  int right = -1;
  int leaf_class = -1;
  double p0 = 0.0;         // class probabilities at training time
  double p1 = 0.0;

  bool is_leaf() const { return feature < 0; }
};

// Axis-aligned binary classification tree, greedy Gini splits. Candidate
// thresholds are midpoints between consecutive distinct sorted values; ties
// break to the lowest feature index, then the lowest threshold. A split must
// leave at least min_leaf rows on each side.
struct DecisionTree {
  std::vector<TreeNode> nodes; // preorder, root at 0
  int max_depth = 0;
  int min_leaf = 0;
  std::size_t arity = 0;
};

DecisionTree train_tree(const LearnDataset& ds, int max_depth, int min_leaf);

int predict(const DecisionTree& tree, const std::vector<double>& fv);
int predict(const DecisionTree& tree, const FeatureVector& fv);

// Single-split threshold rule; readings above the threshold are attacks.
struct Stump {
  int feature_index = 0;
  double threshold = 0.0;
};

int predict(const Stump& stump, double value);

// Benign-envelope detector: per-feature mean and regularized diagonal
// variance; a point is an attack when its Mahalanobis distance exceeds the
// q-quantile of the training distances.
struct OneSidedModel {
  std::vector<double> mu;
  std::vector<double> var; // diagonal, regularized by +1e-9
  double tau = 0.0;
  double quantile = 0.99;
};

OneSidedModel train_one_sided(const LearnDataset& benign_only, double quantile = 0.99);

double mahalanobis(const OneSidedModel& model, const std::vector<double>& fv);
int predict(const OneSidedModel& model, const std::vector<double>& fv);

struct EvalResult {
  long tp = 0, tn = 0, fp = 0, fn = 0;

  double accuracy() const {
    const long total = tp + tn + fp + fn;
    return total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
  }
};

// trainer(train_rows) -> classifier over one feature row.
using Trainer = std::function<std::function<int(const std::vector<double>&)>(
    const LearnDataset&)>;

// Stratified k-fold cross validation with a seeded shuffle; fold sizes per
// class differ by at most one row.
EvalResult kfold_eval(const LearnDataset& ds, int k, std::uint64_t seed,
                      const Trainer& trainer);

Trainer tree_trainer(int max_depth, int min_leaf);

struct WindowVerdict {
  std::int64_t window_start_ns = 0;
  int verdict = 0; // 1 = attack
};

struct DetectionStats {
  std::size_t windows = 0;
  std::size_t dropped_partial = 0;
};

// Tumbling-window SDI-1 detection over one sensor stream: per window,
// extract features for the variant and classify. A trailing window that
// does not span the full window_ms is dropped and counted.
std::vector<WindowVerdict> windowed_detect(const Trace& stream,
                                           std::int64_t window_ms,
                                           const DecisionTree& model,
                                           FeatureVariant variant,
                                           DetectionStats* stats = nullptr);

// Line-oriented model text formats.
void save_tree(const DecisionTree& tree, std::ostream& os);
DecisionTree load_tree(std::istream& is);
void save_tree_file(const DecisionTree& tree, const std::string& path);
DecisionTree load_tree_file(const std::string& path);

void save_stump(const Stump& stump, std::ostream& os);
Stump load_stump(std::istream& is);
void save_stump_file(const Stump& stump, const std::string& path);
Stump load_stump_file(const std::string& path);

void save_one_sided(const OneSidedModel& model, std::ostream& os);
OneSidedModel load_one_sided(std::istream& is);
void save_one_sided_file(const OneSidedModel& model, const std::string& path);
OneSidedModel load_one_sided_file(const std::string& path);

} // namespace sdi

#endif // SDI_LEARN_HPP_
