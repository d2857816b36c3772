#include "echonet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "echonet/error.hpp"
#include "echonet/kernels.hpp"

namespace echonet {
namespace {

struct RunResult {
  std::vector<int> labels;
  std::vector<double> centers;  // row-major k x dim
  double inertia = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
};

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double squared_distance(const double* a, const double* b, std::size_t dim) {
  double d = 0.0;
  for (std::size_t j = 0; j < dim; ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
  return d;
}

std::vector<double> kmeanspp(const std::vector<double>& x, std::size_t n, std::size_t dim, std::size_t k,
                             std::mt19937_64& rng) {
  std::vector<double> centers;
  centers.reserve(k * dim);
  const std::size_t first = std::min(n - 1, static_cast<std::size_t>(unit(rng) * n));
  centers.insert(centers.end(), x.begin() + first * dim, x.begin() + (first + 1) * dim);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(&x[i * dim], &centers[0], dim);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = unit(rng) * total;
      for (pick = 0; pick < n - 1; ++pick) {
        r -= d2[pick];
        if (r < 0.0) break;
      }
      while (d2[pick] == 0.0 && pick > 0) --pick;
    }
    centers.insert(centers.end(), x.begin() + pick * dim, x.begin() + (pick + 1) * dim);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(&x[i * dim], &centers[c * dim], dim));
  }
  return centers;
}

RunResult lloyd(const std::vector<double>& x, std::size_t n, std::size_t dim, const ClusterConfig& cfg,
                double tol_abs, std::uint64_t seed) {
  const std::size_t k = static_cast<std::size_t>(cfg.k);
  std::mt19937_64 rng(seed);
  RunResult r;
  r.centers = kmeanspp(x, n, dim, k, rng);
  r.labels.assign(n, 0);
  std::vector<double> d2(n);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    kernels::assign_nearest_parallel(x, r.centers, dim, r.labels, d2);
    // Reseed empty clusters at the point farthest from its center.
    std::fill(counts.begin(), counts.end(), 0);
    for (int l : r.labels) ++counts[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (d2[i] > d2[far]) far = i;
      --counts[r.labels[far]];
      r.labels[far] = static_cast<int>(c);
      ++counts[c];
      std::copy(x.begin() + far * dim, x.begin() + (far + 1) * dim, r.centers.begin() + c * dim);
      d2[far] = 0.0;
    }
    double inertia = 0.0;
    for (double v : d2) inertia += v;
    r.history.push_back(inertia);
    r.inertia = inertia;
    r.iterations = iter;

    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < dim; ++j) sums[r.labels[i] * dim + j] += x[i * dim + j];
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double next = sums[c * dim + j] / static_cast<double>(counts[c]);
        shift += (next - r.centers[c * dim + j]) * (next - r.centers[c * dim + j]);
        r.centers[c * dim + j] = next;
      }
    }
    if (shift <= tol_abs) break;
  }
  // Final assignment against the last centers.
  kernels::assign_nearest_parallel(x, r.centers, dim, r.labels, d2);
  double inertia = 0.0;
  for (double v : d2) inertia += v;
  if (inertia != r.inertia) r.history.push_back(inertia);
  r.inertia = inertia;
  return r;
}

}  // namespace

ClusterAssignment kmeans(std::span<const std::vector<double>> points, const ClusterConfig& cfg) {
  if (cfg.k < 2) throw ConfigError("k-means needs k >= 2");
  if (cfg.n_init < 1) throw ConfigError("k-means needs n_init >= 1");
  if (cfg.max_iter < 1) throw ConfigError("k-means needs max_iter >= 1");
  const std::size_t n = points.size();
  if (n == 0) throw DataError("k-means on an empty point set");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw DataError("k-means points have inconsistent dimensions");
  std::set<std::vector<double>> distinct(points.begin(), points.end());
  if (distinct.size() < static_cast<std::size_t>(cfg.k))
    throw DataError("k-means needs at least " + std::to_string(cfg.k) + " distinct points, got " +
                    std::to_string(distinct.size()));

  std::vector<double> x(n * dim);
  for (std::size_t i = 0; i < n; ++i) std::copy(points[i].begin(), points[i].end(), x.begin() + i * dim);
  std::vector<double> mean(dim, 0.0), var(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j) mean[j] += x[i * dim + j] / n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j) var[j] += (x[i * dim + j] - mean[j]) * (x[i * dim + j] - mean[j]) / n;
  if (cfg.standardize) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        x[i * dim + j] = var[j] > 0.0 ? (x[i * dim + j] - mean[j]) / std::sqrt(var[j]) : 0.0;
    for (std::size_t j = 0; j < dim; ++j) var[j] = var[j] > 0.0 ? 1.0 : 0.0;
  }
  double mean_var = 0.0;
  for (double v : var) mean_var += v / dim;
  const double tol_abs = cfg.tol * mean_var;

  std::vector<RunResult> runs(static_cast<std::size_t>(cfg.n_init));
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32)};
  std::vector<std::uint32_t> seeds(2 * runs.size());
  seq.generate(seeds.begin(), seeds.end());
  // Restarts run one after another; the assignment kernel inside each is
  // the parallel part.
  for (std::size_t r = 0; r < runs.size(); ++r)
    runs[r] = lloyd(x, n, dim, cfg, tol_abs, (std::uint64_t{seeds[2 * r]} << 32) | seeds[2 * r + 1]);
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;

  ClusterAssignment out;
  out.labels = std::move(runs[best].labels);
  out.inertia = runs[best].inertia;
  out.iterations = runs[best].iterations;
  out.inertia_history = std::move(runs[best].history);
  for (int c = 0; c < cfg.k; ++c)
    out.centers.emplace_back(runs[best].centers.begin() + c * dim, runs[best].centers.begin() + (c + 1) * dim);
  return out;
}

ClusterAssignment kmeans(std::span<const UserVector> vectors, const ClusterConfig& cfg) {
  std::vector<std::vector<double>> points;
  points.reserve(vectors.size());
  for (const auto& v : vectors) points.push_back(v.values);
  ClusterAssignment out = kmeans(points, cfg);
  for (const auto& v : vectors) out.users.push_back(v.user_id);
  return out;
}

double rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DataError("rand index over labelings of different length");
  if (a.size() < 2) throw DataError("rand index is undefined for fewer than two items");
  std::map<std::pair<int, int>, std::int64_t> joint;
  std::map<int, std::int64_t> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  auto pairs = [](std::int64_t m) { return m * (m - 1) / 2; };
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  std::int64_t together_both = 0, together_a = 0, together_b = 0;
  for (const auto& [key, m] : joint) together_both += pairs(m);
  for (const auto& [key, m] : rows) together_a += pairs(m);
  for (const auto& [key, m] : cols) together_b += pairs(m);
  const std::int64_t total = pairs(n);
  // Agreements = pairs together in both + pairs apart in both.
  const std::int64_t agree = total + 2 * together_both - together_a - together_b;
  return static_cast<double>(agree) / static_cast<double>(total);
}

double rand_index(const ClusterAssignment& pred, const std::map<std::string, std::string>& gold) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < pred.users.size(); ++i) index[pred.users[i]] = pred.labels[i];
  std::map<std::string, int> gold_ids;
  std::vector<int> a, b;
  for (const auto& [user, label] : gold) {
    auto it = index.find(user);
    if (it == index.end()) throw DataError("gold user '" + user + "' has no cluster assignment");
    a.push_back(it->second);
    b.push_back(gold_ids.emplace(label, static_cast<int>(gold_ids.size())).first->second);
  }
  return rand_index(a, b);
}

std::vector<std::string> collapse_gold(std::span<const std::string> labels, GoldScheme scheme) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    const Label parsed = parse_label(l);
    if (scheme == GoldScheme::TwoClass && parsed != Label::HM) {
      out.emplace_back("NOT_HM");
    } else {
      out.emplace_back(to_string(parsed));
    }
  }
  return out;
}

std::map<std::string, std::string> collapse_gold(const std::map<std::string, Label>& labels, GoldScheme scheme) {
  std::map<std::string, std::string> out;
  for (const auto& [user, l] : labels)
    out[user] = scheme == GoldScheme::TwoClass && l != Label::HM ? std::string("NOT_HM")
                                                                 : std::string(to_string(l));
  return out;
}

}  // namespace echonet
