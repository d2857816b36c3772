#include <algorithm>
#include <cmath>
#include <numeric>

#include "echonet/error.hpp"
#include "echonet/fusion.hpp"

namespace echonet {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(const std::vector<double>& x, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * w[j];
  return s;
}

std::unique_ptr<UserClassifier> train_logreg(std::span<const std::vector<double>> rows, std::span<const int> labels,
                                             const ClassifierConfig& cfg) {
  const std::size_t dim = rows.front().size();
  std::vector<double> w(dim, 0.0), gw, trial_w(dim);
  double b = 0.0, gb = 0.0;
  double loss = LogisticRegression::loss_and_gradient(rows, labels, w, b, cfg.l2, &gw, &gb);
  double step = 1.0;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    double gnorm2 = gb * gb;
    for (double g : gw) gnorm2 += g * g;
    if (std::sqrt(gnorm2) < cfg.tolerance) break;
    // Armijo backtracking.
    double trial_loss = 0.0;
    double trial_b = 0.0;
    while (true) {
      for (std::size_t j = 0; j < dim; ++j) trial_w[j] = w[j] - step * gw[j];
      trial_b = b - step * gb;
      trial_loss = LogisticRegression::loss_and_gradient(rows, labels, trial_w, trial_b, cfg.l2, nullptr, nullptr);
      if (trial_loss <= loss - 0.5 * step * gnorm2 || step < 1e-12) break;
      step *= 0.5;
    }
    const double improvement = loss - trial_loss;
    w.swap(trial_w);
    b = trial_b;
    loss = LogisticRegression::loss_and_gradient(rows, labels, w, b, cfg.l2, &gw, &gb);
    step *= 2.0;
    if (improvement >= 0.0 && improvement < 1e-14) break;
  }
  return std::make_unique<LogisticRegression>(std::move(w), b);
}

// One regression tree fitted to gradients g and hessians h by exact
// greedy splitting.
class TreeBuilder {
 public:
  TreeBuilder(std::span<const std::vector<double>> rows, const std::vector<double>& g, const std::vector<double>& h,
              const ClassifierConfig& cfg)
      : rows_(rows), g_(g), h_(h), cfg_(cfg) {}

  GradientBoostedTrees::Tree build() {
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), 0);
    grow(all, 0);
    return std::move(tree_);
  }

 private:
  int leaf(const std::vector<std::size_t>& idx) {
    double sg = 0.0, sh = 0.0;
    for (auto i : idx) {
      sg += g_[i];
      sh += h_[i];
    }
    tree_.push_back({-1, 0.0, -1, -1, sh > 0.0 ? sg / (sh + 1e-6) : 0.0});
    return static_cast<int>(tree_.size() - 1);
  }

  int grow(const std::vector<std::size_t>& idx, int depth) {
    if (depth >= cfg_.depth || idx.size() < 2 * static_cast<std::size_t>(cfg_.min_leaf)) return leaf(idx);
    double total_g = 0.0, total_h = 0.0;
    for (auto i : idx) {
      total_g += g_[i];
      total_h += h_[i];
    }
    const double parent = total_g * total_g / (total_h + 1e-6);
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order = idx;
    for (std::size_t f = 0; f < rows_.front().size(); ++f) {
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rows_[a][f] < rows_[b][f]; });
      double lg = 0.0, lh = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        lg += g_[order[k]];
        lh += h_[order[k]];
        const double here = rows_[order[k]][f];
        const double next = rows_[order[k + 1]][f];
        if (here == next || k + 1 < static_cast<std::size_t>(cfg_.min_leaf) ||
            order.size() - k - 1 < static_cast<std::size_t>(cfg_.min_leaf))
          continue;
        const double rg = total_g - lg, rh = total_h - lh;
        const double gain = lg * lg / (lh + 1e-6) + rg * rg / (rh + 1e-6) - parent;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (here + next);
        }
      }
    }
    if (best_feature < 0) return leaf(idx);
    std::vector<std::size_t> left, right;
    for (auto i : idx) (rows_[i][best_feature] <= best_threshold ? left : right).push_back(i);
    const int self = static_cast<int>(tree_.size());
    tree_.push_back({best_feature, best_threshold, -1, -1, 0.0});
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_[self].left = l;
    tree_[self].right = r;
    return self;
  }

  std::span<const std::vector<double>> rows_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  const ClassifierConfig& cfg_;
  GradientBoostedTrees::Tree tree_;
};

double tree_value(const GradientBoostedTrees::Tree& tree, const std::vector<double>& x) {
  int node = 0;
  while (tree[node].feature >= 0) node = x[tree[node].feature] <= tree[node].threshold ? tree[node].left : tree[node].right;
  return tree[node].value;
}

std::unique_ptr<UserClassifier> train_gbt(std::span<const std::vector<double>> rows, std::span<const int> labels,
                                          const ClassifierConfig& cfg) {
  const std::size_t n = rows.size();
  const double positives = std::accumulate(labels.begin(), labels.end(), 0.0);
  const double base = std::log(positives / (n - positives));
  std::vector<double> margin(n, base), g(n), h(n);
  std::vector<GradientBoostedTrees::Tree> trees;
  for (int t = 0; t < cfg.trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      g[i] = labels[i] - p;  // negative gradient
      h[i] = p * (1.0 - p);
    }
    auto tree = TreeBuilder(rows, g, h, cfg).build();
    for (std::size_t i = 0; i < n; ++i) margin[i] += cfg.learning_rate * tree_value(tree, rows[i]);
    trees.push_back(std::move(tree));
  }
  return std::make_unique<GradientBoostedTrees>(base, cfg.learning_rate, std::move(trees));
}

}  // namespace

ClassifierKind parse_classifier(std::string_view text) {
  if (text == "logreg") return ClassifierKind::LogReg;
  if (text == "gbt") return ClassifierKind::GBT;
  throw ConfigError("unknown classifier '" + std::string(text) + "'");
}

std::string_view to_string(ClassifierKind k) { return k == ClassifierKind::LogReg ? "logreg" : "gbt"; }

double LogisticRegression::loss_and_gradient(std::span<const std::vector<double>> rows, std::span<const int> labels,
                                             std::span<const double> weights, double bias, double l2,
                                             std::vector<double>* grad_w, double* grad_b) {
  const double n = static_cast<double>(rows.size());
  if (grad_w) grad_w->assign(weights.size(), 0.0);
  double loss = 0.0, gb = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double z = dot(rows[i], weights) + bias;
    loss += softplus(z) - labels[i] * z;
    const double r = (sigmoid(z) - labels[i]) / n;
    gb += r;
    if (grad_w)
      for (std::size_t j = 0; j < weights.size(); ++j) (*grad_w)[j] += r * rows[i][j];
  }
  loss /= n;
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  loss += 0.5 * l2 * sq;
  if (grad_w)
    for (std::size_t j = 0; j < weights.size(); ++j) (*grad_w)[j] += l2 * weights[j];
  if (grad_b) *grad_b = gb;
  return loss;
}

std::vector<double> LogisticRegression::predict_proba(std::span<const std::vector<double>> rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != weights_.size()) throw DataError("feature length does not match the trained model");
    out.push_back(sigmoid(dot(r, weights_) + bias_));
  }
  return out;
}

std::vector<double> GradientBoostedTrees::predict_proba(std::span<const std::vector<double>> rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    double m = base_;
    for (const auto& t : trees_) m += learning_rate_ * tree_value(t, r);
    out.push_back(sigmoid(m));
  }
  return out;
}

std::unique_ptr<UserClassifier> train_user_classifier(std::span<const std::vector<double>> rows,
                                                      std::span<const int> labels, const ClassifierConfig& cfg) {
  if (rows.size() != labels.size()) throw DataError("feature and label counts differ");
  std::size_t pos = 0;
  for (int l : labels) pos += l == 1;
  const std::size_t neg = labels.size() - pos;
  if (pos < cfg.min_per_class || neg < cfg.min_per_class)
    throw TrainingError("user classifier needs >= " + std::to_string(cfg.min_per_class) +
                        " examples per class, got " + std::to_string(pos) + " HM / " + std::to_string(neg) +
                        " other");
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != dim) throw DataError("feature vectors differ in length");
  return cfg.kind == ClassifierKind::LogReg ? train_logreg(rows, labels, cfg) : train_gbt(rows, labels, cfg);
}

double roc_auc(std::span<const double> proba, std::span<const int> labels) {
  const std::size_t n = proba.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return proba[a] < proba[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && proba[order[j + 1]] == proba[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == 1) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) return 0.5;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

BinaryMetrics binary_metrics(std::span<const double> proba, std::span<const int> labels, double threshold) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < proba.size(); ++i) {
    const bool predicted = proba[i] >= threshold;
    tp += predicted && labels[i] == 1;
    fp += predicted && labels[i] != 1;
    fn += !predicted && labels[i] == 1;
  }
  BinaryMetrics m;
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.auc = roc_auc(proba, labels);
  return m;
}

}  // namespace echonet
