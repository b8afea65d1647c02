#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eventrail {

inline constexpr int kNoise = -1;

struct HdbscanParams {
  std::size_t min_cluster_size = 50;
  std::size_t min_samples = 0;  // 0: same as min_cluster_size
  // Smallest distance the data can resolve (seconds). Core distances are
  // floored at it, so riders stamped in the same second are no denser than
  // riders one second apart and same-second stacks cannot outvote their train.
  // 0 restores plain HDBSCAN*, where zero distances rank above everything.
  double resolution = 1.0;

  std::size_t effective_min_samples() const {
    return min_samples == 0 ? min_cluster_size : min_samples;
  }
};

struct Clustering {
  std::vector<int> labels;  // per input point, cluster id or kNoise
  int n_clusters = 0;
  HdbscanParams params;
};

// HDBSCAN* on scalar points (seconds). Core distance is the distance to the
// min_samples-th nearest point counting the point itself. Clusters come from
// excess-of-mass selection on the condensed tree, ties going to the children;
// the root is only returned when it never splits. Cluster ids are ordered by
// each cluster's smallest member, so labels are invariant to input order.
// Throws TooFewPoints when points.size() < min_cluster_size.
Clustering hdbscan_1d(std::span<const std::int64_t> points, const HdbscanParams& params = {});

}  // namespace eventrail
