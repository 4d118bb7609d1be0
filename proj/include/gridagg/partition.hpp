// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_PARTITION_HPP_
#define GRIDAGG_PARTITION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gridagg/dcopf.hpp"
#include "gridagg/grid.hpp"
#include "gridagg/ptdf.hpp"
#include "gridagg/random.hpp"

namespace gridagg {

enum class Metric { lmp, ncp };

/// Per-bus feature rows used as the clustering distance metric:
/// one column for LMP, one column per line for NCP.
struct FeatureMatrix {
  Matrix values;
  Metric metric = Metric::lmp;
};

inline FeatureMatrix lmp_features(const DcOpfSolution& solution, const PtdfMatrix& ptdf) {
  FeatureMatrix f;
  f.metric = Metric::lmp;
  f.values = lmp(solution, ptdf);
  return f;
}

inline FeatureMatrix ncp_features(const DcOpfSolution& solution, const PtdfMatrix& ptdf) {
  FeatureMatrix f;
  f.metric = Metric::ncp;
  f.values = ncp(solution, ptdf).values;
  return f;
}

enum class PartitionMethod { lmp_kmeans, lmp_sc, lmp_anac, ncp_kmeans, ncp_anac };

inline constexpr PartitionMethod kAllMethods[] = {
    PartitionMethod::lmp_kmeans, PartitionMethod::lmp_sc, PartitionMethod::lmp_anac,
    PartitionMethod::ncp_kmeans, PartitionMethod::ncp_anac};

inline const char* to_string(PartitionMethod m) {
  switch (m) {
    case PartitionMethod::lmp_kmeans: return "lmp-kmeans";
    case PartitionMethod::lmp_sc: return "lmp-sc";
    case PartitionMethod::lmp_anac: return "lmp-anac";
    case PartitionMethod::ncp_kmeans: return "ncp-kmeans";
    case PartitionMethod::ncp_anac: return "ncp-anac";
  }
  return "lmp-kmeans";
}

inline std::optional<PartitionMethod> partition_method_from_string(const std::string& s) {
  for (PartitionMethod m : kAllMethods)
    if (s == to_string(m)) return m;
  return std::nullopt;
}

inline Metric metric_of(PartitionMethod m) {
  return (m == PartitionMethod::ncp_kmeans || m == PartitionMethod::ncp_anac) ? Metric::ncp
                                                                              : Metric::lmp;
}

/// A node-cluster assignment plus the derived line selection. Cluster
/// labels are canonical: clusters are numbered by their smallest bus id.
struct PartitionResult {
  int n_clusters = 0;
  std::vector<int> assignment;      // bus -> cluster
  std::vector<int> retained_lines;  // inter-cluster lines, original order
  PartitionMethod method = PartitionMethod::lmp_kmeans;
  std::uint64_t seed = 0;

  Matrix node_map() const {
    const int n = static_cast<int>(assignment.size());
    Matrix m = Matrix::Zero(n_clusters, n);
    for (int b = 0; b < n; ++b) m(assignment[b], b) = 1.0;
    return m;
  }

  std::vector<std::vector<int>> clusters() const {
    std::vector<std::vector<int>> out(n_clusters);
    for (int b = 0; b < static_cast<int>(assignment.size()); ++b)
      out[assignment[b]].push_back(b);
    return out;
  }
};

/// Inter-cluster line selection: lines internal to a cluster are dropped,
/// every other line keeps its own row (and original limit) in the reduced
/// model.
inline std::vector<int> derive_line_map(const Grid& grid, const std::vector<int>& assignment) {
  std::vector<int> retained;
  for (const Line& l : grid.lines)
    if (assignment[l.from_bus] != assignment[l.to_bus]) retained.push_back(l.id);
  return retained;
}

/// The retained-line selection as an explicit 0/1 matrix of shape
/// (retained x total lines).
inline Matrix line_map_matrix(const std::vector<int>& retained_lines, int n_lines) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(retained_lines.size()), n_lines);
  for (std::size_t r = 0; r < retained_lines.size(); ++r) m(r, retained_lines[r]) = 1.0;
  return m;
}

/// True if every cluster induces a connected subgraph of the grid.
inline bool clusters_contiguous(const Grid& grid, const std::vector<int>& assignment) {
  const int n = grid.n_buses();
  std::vector<std::vector<int>> adj(n);
  for (const Line& l : grid.lines) {
    if (assignment[l.from_bus] != assignment[l.to_bus]) continue;
    adj[l.from_bus].push_back(l.to_bus);
    adj[l.to_bus].push_back(l.from_bus);
  }
  std::vector<char> seen(n, 0);
  const int n_clusters = assignment.empty() ? 0 : 1 + *std::max_element(assignment.begin(),
                                                                        assignment.end());
  for (int c = 0; c < n_clusters; ++c) {
    int start = -1;
    for (int b = 0; b < n; ++b)
      if (assignment[b] == c) {
        start = b;
        break;
      }
    if (start < 0) return false;  // empty cluster
    std::vector<int> queue{start};
    seen[start] = 1;
    int reached = 1, total = 0;
    for (int b = 0; b < n; ++b) total += assignment[b] == c;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int next : adj[queue[head]]) {
        if (!seen[next]) {
          seen[next] = 1;
          ++reached;
          queue.push_back(next);
        }
      }
    }
    if (reached != total) return false;
  }
  return true;
}

namespace detail {

/// Relabels clusters so cluster c is the one whose smallest member bus is
/// the c-th smallest among cluster minima. Keeps results comparable across
/// algorithms and runs.
inline void canonicalize_labels(std::vector<int>& assignment, int n_clusters) {
  std::vector<int> relabel(n_clusters, -1);
  int next = 0;
  for (int label : assignment) {
    if (relabel[label] < 0) relabel[label] = next++;
  }
  for (int& label : assignment) label = relabel[label];
}

/// Lloyd's algorithm with k-means++ seeding. Only assignments are used by
/// the callers; centroids stay internal. Empty clusters are repaired by
/// splitting the largest cluster at its farthest member.
inline std::vector<int> kmeans_assign(const Matrix& points, int k, SplitMix64& rng) {
  const int n = static_cast<int>(points.rows());
  const int dims = static_cast<int>(points.cols());

  // k-means++: first center uniform, the rest sampled with probability
  // proportional to squared distance to the nearest chosen center. When all
  // remaining distances vanish (duplicate points), fall back to the first
  // point that is not a center yet.
  std::vector<int> center_idx;
  center_idx.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
  Vector dist2 = (points.rowwise() - points.row(center_idx[0])).rowwise().squaredNorm();
  std::vector<char> is_center(n, 0);
  is_center[center_idx[0]] = 1;
  while (static_cast<int>(center_idx.size()) < k) {
    const double total = dist2.sum();
    int pick = -1;
    if (total > 0.0) {
      const double u = rng.next_double() * total;
      double cum = 0.0;
      for (int i = 0; i < n; ++i) {
        cum += dist2[i];
        if (u < cum) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // u landed on the accumulated rounding tail
        for (int i = n - 1; i >= 0; --i)
          if (dist2[i] > 0.0) {
            pick = i;
            break;
          }
      }
    }
    if (pick < 0) {
      for (int i = 0; i < n; ++i)
        if (!is_center[i]) {
          pick = i;
          break;
        }
    }
    center_idx.push_back(pick);
    is_center[pick] = 1;
    dist2 = dist2.cwiseMin(
        (points.rowwise() - points.row(pick)).rowwise().squaredNorm().eval());
  }

  Matrix centers(k, dims);
  for (int c = 0; c < k; ++c) centers.row(c) = points.row(center_idx[c]);

  std::vector<int> assignment(n, 0);
  const Vector point_norms = points.rowwise().squaredNorm();
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = iter == 0;
    // Squared distances via |p|^2 - 2 p.c + |c|^2; one matrix product per
    // sweep instead of a per-pair difference.
    const Matrix cross = points * centers.transpose();
    const Vector center_norms = centers.rowwise().squaredNorm();
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = point_norms[i] - 2.0 * cross(i, 0) + center_norms[0];
      for (int c = 1; c < k; ++c) {
        const double d = point_norms[i] - 2.0 * cross(i, c) + center_norms[c];
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }

    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) ++count[assignment[i]];
    for (int empty = 0; empty < k; ++empty) {
      if (count[empty] > 0) continue;
      int donor = 0;
      for (int c = 1; c < k; ++c)
        if (count[c] > count[donor]) donor = c;
      int moved = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (assignment[i] != donor) continue;
        const double d = (points.row(i) - centers.row(donor)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          moved = i;
        }
      }
      assignment[moved] = empty;
      --count[donor];
      ++count[empty];
      changed = true;
    }

    if (!changed) break;
    centers.setZero();
    for (int i = 0; i < n; ++i) centers.row(assignment[i]) += points.row(i);
    for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(count[c]);
  }
  return assignment;
}

inline double kmeans_inertia(const Matrix& points, const std::vector<int>& assignment, int k) {
  Matrix centers = Matrix::Zero(k, points.cols());
  std::vector<int> count(k, 0);
  for (int i = 0; i < points.rows(); ++i) {
    centers.row(assignment[i]) += points.row(i);
    ++count[assignment[i]];
  }
  for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(count[c]);
  double inertia = 0.0;
  for (int i = 0; i < points.rows(); ++i)
    inertia += (points.row(i) - centers.row(assignment[i])).squaredNorm();
  return inertia;
}

inline std::vector<int> kmeans_best_of(const Matrix& points, int k, std::uint64_t seed,
                                       int n_init = 10) {
  SplitMix64 rng(seed);
  std::vector<int> best;
  double best_inertia = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < n_init; ++restart) {
    std::vector<int> assignment = kmeans_assign(points, k, rng);
    const double inertia = kmeans_inertia(points, assignment, k);
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best = std::move(assignment);
    }
  }
  return best;
}

}  // namespace detail

/// KMeans over the feature rows (Table-I "KMeans" column).
inline PartitionResult kmeans_partition(const Grid& grid, const FeatureMatrix& features,
                                        int n_clusters, std::uint64_t seed) {
  const int n = static_cast<int>(features.values.rows());
  if (n_clusters < 1 || n_clusters > n)
    throw std::invalid_argument("kmeans_partition: cluster count out of range");

  PartitionResult result;
  result.n_clusters = n_clusters;
  result.seed = seed;
  result.method =
      features.metric == Metric::ncp ? PartitionMethod::ncp_kmeans : PartitionMethod::lmp_kmeans;
  result.assignment = detail::kmeans_best_of(features.values, n_clusters, seed);
  detail::canonicalize_labels(result.assignment, n_clusters);
  result.retained_lines = derive_line_map(grid, result.assignment);
  return result;
}

/// Per-line affinity for spectral clustering: the inverse absolute LMP
/// difference across the line, capped at rho_cap so uncongested systems
/// (zero difference everywhere) stay finite.
inline Vector spectral_rho(const Grid& grid, const Vector& lmps, double rho_cap = 1e6) {
  Vector rho(grid.n_lines());
  for (const Line& l : grid.lines) {
    const double delta = std::abs(lmps[l.from_bus] - lmps[l.to_bus]);
    rho[l.id] = 1.0 / std::max(delta, 1.0 / rho_cap);
  }
  return rho;
}

/// Spectral clustering on the inverse-LMP-difference affinity: rho per line
/// summed over parallel lines into a bus-pair affinity, then KMeans on the
/// eigenvectors of the n_clusters smallest eigenvalues of the symmetric
/// normalized Laplacian.
inline PartitionResult spectral_partition(const Grid& grid, const Vector& lmps, int n_clusters,
                                          std::uint64_t seed, double rho_cap = 1e6) {
  const int n = grid.n_buses();
  if (n_clusters < 2 || n_clusters > n)
    throw std::invalid_argument("spectral_partition: cluster count out of range (needs >= 2)");

  const Vector rho = spectral_rho(grid, lmps, rho_cap);
  Matrix affinity = Matrix::Zero(n, n);
  for (const Line& l : grid.lines) {
    affinity(l.from_bus, l.to_bus) += rho[l.id];
    affinity(l.to_bus, l.from_bus) += rho[l.id];
  }

  Vector inv_sqrt_degree(n);
  for (int i = 0; i < n; ++i) inv_sqrt_degree[i] = 1.0 / std::sqrt(affinity.row(i).sum());
  Matrix laplacian = Matrix::Identity(n, n) -
                     inv_sqrt_degree.asDiagonal() * affinity * inv_sqrt_degree.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Matrix> eigen(laplacian);
  if (eigen.info() != Eigen::Success)
    throw std::runtime_error("spectral_partition: eigendecomposition failed");
  const Matrix embedding = eigen.eigenvectors().leftCols(n_clusters);

  PartitionResult result;
  result.n_clusters = n_clusters;
  result.seed = seed;
  result.method = PartitionMethod::lmp_sc;
  result.assignment = detail::kmeans_best_of(embedding, n_clusters, seed);
  detail::canonicalize_labels(result.assignment, n_clusters);
  result.retained_lines = derive_line_map(grid, result.assignment);
  return result;
}

/// Everything-at-once result of the adjacent-node agglomerative merge: one
/// run records the partition at every intermediate cluster count, so any
/// coarser partition is a replay away.
struct AnacHistory {
  int n_buses = 0;
  int min_clusters = 1;
  /// assignments[c - min_clusters] is the bus->cluster assignment with c
  /// clusters, canonical labels.
  std::vector<std::vector<int>> assignments;

  const std::vector<int>& at(int n_clusters) const {
    if (n_clusters < min_clusters || n_clusters > n_buses)
      throw std::out_of_range("AnacHistory: no partition for that cluster count");
    return assignments[n_clusters - min_clusters];
  }
};

/// Adjacent node agglomerative clustering. Each iteration recomputes the
/// pairwise Euclidean distances of the current cluster feature rows, adds a
/// penalty that disqualifies non-adjacent pairs, merges the argmin pair
/// (lexicographically smallest on ties), and updates cluster features with
/// the weighted average using w_m = 1/size(merged), w_n = 1 - w_m. The full
/// model is never re-solved between merges.
inline AnacHistory anac_history(const Grid& grid, const FeatureMatrix& features,
                                int min_clusters = 1) {
  const int n = grid.n_buses();
  if (min_clusters < 1 || min_clusters > n)
    throw std::invalid_argument("anac_history: cluster count out of range");

  Matrix x = features.values;                      // cluster feature rows
  Vector sizes = Vector::Ones(n);                  // cluster-size counter
  Matrix node_map = Matrix::Identity(n, n);        // original bus -> cluster
  Matrix adjacency = Matrix::Zero(n, n);           // nodal incidence K'K off-diagonal
  for (const Line& l : grid.lines) {
    adjacency(l.from_bus, l.to_bus) = 1.0;
    adjacency(l.to_bus, l.from_bus) = 1.0;
  }

  AnacHistory history;
  history.n_buses = n;
  history.min_clusters = min_clusters;
  history.assignments.resize(n - min_clusters + 1);

  auto snapshot = [&history, &node_map, n, min_clusters](int c) {
    std::vector<int> assignment(n, -1);
    for (int cluster = 0; cluster < c; ++cluster)
      for (int b = 0; b < n; ++b)
        if (node_map(cluster, b) > 0.5) assignment[b] = cluster;
    detail::canonicalize_labels(assignment, c);
    history.assignments[c - min_clusters] = std::move(assignment);
  };

  snapshot(n);
  for (int c = n; c > min_clusters; --c) {
    // Weighted distance matrix: distances plus the adjacency penalty.
    Matrix dist(c, c);
    for (int a = 0; a < c; ++a) {
      dist(a, a) = 0.0;
      for (int b = a + 1; b < c; ++b) {
        const double d = (x.row(a) - x.row(b)).norm();
        dist(a, b) = d;
        dist(b, a) = d;
      }
    }
    const double eps = dist.maxCoeff() * (1.0 + 1e-6) + 1.0;
    Matrix weighted = dist + (Matrix::Ones(c, c) - adjacency + Matrix::Identity(c, c)) * eps;

    int merge_into = -1, merge_from = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < c; ++a)
      for (int b = a + 1; b < c; ++b)
        if (weighted(a, b) < best) {
          best = weighted(a, b);
          merge_into = a;
          merge_from = b;
        }

    // Merge matrix: identity with the merge_from column folded into the
    // merge_into row.
    Matrix merge = Matrix::Zero(c - 1, c);
    for (int col = 0, row = 0; col < c; ++col) {
      if (col == merge_from) continue;
      merge(row, col) = 1.0;
      ++row;
    }
    merge(merge_into, merge_from) = 1.0;

    const Vector new_sizes = merge * sizes;
    Vector weights = Vector::Ones(c);
    weights[merge_from] = 1.0 / new_sizes[merge_into];
    weights[merge_into] = 1.0 - weights[merge_from];

    x = merge * weights.asDiagonal() * x;
    Matrix merged_adj = merge * adjacency * merge.transpose();
    for (int a = 0; a < c - 1; ++a) {
      merged_adj(a, a) = 0.0;
      for (int b = 0; b < c - 1; ++b)
        if (merged_adj(a, b) > 0.5) merged_adj(a, b) = 1.0;
    }
    adjacency = std::move(merged_adj);
    node_map = merge * node_map;
    sizes = new_sizes;
    snapshot(c - 1);
  }
  return history;
}

inline PartitionResult anac_partition(const Grid& grid, const FeatureMatrix& features,
                                      int n_clusters) {
  const AnacHistory history = anac_history(grid, features, n_clusters);
  PartitionResult result;
  result.n_clusters = n_clusters;
  result.seed = 0;
  result.method =
      features.metric == Metric::ncp ? PartitionMethod::ncp_anac : PartitionMethod::lmp_anac;
  result.assignment = history.at(n_clusters);
  result.retained_lines = derive_line_map(grid, result.assignment);
  return result;
}

/// Single-cluster partition, used as the spectral fallback when the
/// embedding is undefined.
inline PartitionResult trivial_partition(const Grid& grid, PartitionMethod method,
                                         std::uint64_t seed) {
  PartitionResult result;
  result.n_clusters = 1;
  result.assignment.assign(grid.n_buses(), 0);
  result.retained_lines = {};
  result.method = method;
  result.seed = seed;
  return result;
}

/// Table-I dispatcher: the five distance-metric x algorithm combinations.
inline PartitionResult partition_with_method(const Grid& grid, const PtdfMatrix& ptdf,
                                             const DcOpfSolution& solution, PartitionMethod method,
                                             int n_clusters, std::uint64_t seed,
                                             double rho_cap = 1e6) {
  switch (method) {
    case PartitionMethod::lmp_kmeans:
      return kmeans_partition(grid, lmp_features(solution, ptdf), n_clusters, seed);
    case PartitionMethod::ncp_kmeans:
      return kmeans_partition(grid, ncp_features(solution, ptdf), n_clusters, seed);
    case PartitionMethod::lmp_sc: {
      if (n_clusters == 1) return trivial_partition(grid, method, seed);
      return spectral_partition(grid, lmp(solution, ptdf), n_clusters, seed, rho_cap);
    }
    case PartitionMethod::lmp_anac:
      return anac_partition(grid, lmp_features(solution, ptdf), n_clusters);
    case PartitionMethod::ncp_anac:
      return anac_partition(grid, ncp_features(solution, ptdf), n_clusters);
  }
  throw std::invalid_argument("partition_with_method: unknown method");
}

}  // namespace gridagg

#endif  // GRIDAGG_PARTITION_HPP_
