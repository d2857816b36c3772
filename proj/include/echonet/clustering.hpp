#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "echonet/corpus.hpp"
#include "echonet/user_repr.hpp"

namespace echonet {

struct ClusterConfig {
  int k = 3;
  int n_init = 10;
  int max_iter = 300;
  double tol = 1e-4;
  std::uint64_t seed = 0;
  bool standardize = false;  // z-score each feature before clustering
};

struct ClusterAssignment {
  std::vector<std::string> users;  // empty when clustering raw points
  std::vector<int> labels;         // cluster index per point, in [0, k)
  std::vector<std::vector<double>> centers;
  double inertia = 0.0;
  int iterations = 0;
  // Inertia after each assignment step of the winning run.
  std::vector<double> inertia_history;
};

// k-means++ seeding, Lloyd iterations, best of n_init restarts by inertia
// (ties go to the earlier restart). Empty clusters are reseeded at the point
// farthest from its center. Throws DataError with fewer than k distinct
// points, ConfigError on bad parameters.
ClusterAssignment kmeans(std::span<const std::vector<double>> points, const ClusterConfig& cfg);
ClusterAssignment kmeans(std::span<const UserVector> vectors, const ClusterConfig& cfg);

// Unadjusted Rand Index over two labelings of the same items.
// Throws DataError with fewer than two items or mismatched lengths.
double rand_index(std::span<const int> a, std::span<const int> b);

// Rand Index of `pred` restricted to the users in `gold`. Throws DataError if
// a gold user is missing from `pred` or fewer than two users remain.
double rand_index(const ClusterAssignment& pred, const std::map<std::string, std::string>& gold);

enum class GoldScheme { TwoClass, ThreeClass };

// two_class maps R and N to NOT_HM; three_class keeps HM / R / N.
// Throws DataError on a label outside {HM, R, N}.
std::vector<std::string> collapse_gold(std::span<const std::string> labels, GoldScheme scheme);
std::map<std::string, std::string> collapse_gold(const std::map<std::string, Label>& labels, GoldScheme scheme);

}  // namespace echonet
