#include "eventrail/hdbscan.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "eventrail/error.hpp"

namespace eventrail {
namespace {

// Distinct values with multiplicities; identical points are indistinguishable
// to the algorithm and always share a label.
struct Atoms {
  std::vector<std::int64_t> value;
  std::vector<std::size_t> weight;
};

Atoms make_atoms(std::span<const std::int64_t> points) {
  std::vector<std::int64_t> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  Atoms atoms;
  for (std::int64_t v : sorted) {
    if (atoms.value.empty() || atoms.value.back() != v) {
      atoms.value.push_back(v);
      atoms.weight.push_back(1);
    } else {
      ++atoms.weight.back();
    }
  }
  return atoms;
}

std::vector<double> core_distances(const Atoms& atoms, std::size_t k, double resolution) {
  const std::size_t m = atoms.value.size();
  std::vector<double> core(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t count = atoms.weight[j];
    std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(j) - 1;
    std::size_t hi = j + 1;
    double dist = 0.0;
    while (count < k) {
      const double dl = lo >= 0 ? static_cast<double>(atoms.value[j] - atoms.value[lo])
                                : std::numeric_limits<double>::infinity();
      const double dr = hi < m ? static_cast<double>(atoms.value[hi] - atoms.value[j])
                               : std::numeric_limits<double>::infinity();
      if (dl <= dr) {
        dist = dl;
        count += atoms.weight[lo--];
      } else {
        dist = dr;
        count += atoms.weight[hi++];
      }
    }
    core[j] = std::max(dist, resolution);
  }
  return core;
}

struct Edge {
  std::size_t a;
  std::size_t b;
  double weight;
};

// Prim over the complete mutual-reachability graph.
std::vector<Edge> minimum_spanning_tree(const Atoms& atoms, const std::vector<double>& core) {
  const std::size_t m = atoms.value.size();
  std::vector<Edge> edges;
  if (m < 2) return edges;
  edges.reserve(m - 1);
  std::vector<bool> in_tree(m, false);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(m, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < m; ++step) {
    std::size_t next = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (in_tree[j]) continue;
      const double gap = std::abs(static_cast<double>(atoms.value[j] - atoms.value[current]));
      const double d = std::max({core[current], core[j], gap});
      if (d < best[j]) {
        best[j] = d;
        from[j] = current;
      }
      if (next == m || best[j] < best[next]) next = j;
    }
    in_tree[next] = true;
    edges.push_back({std::min(from[next], next), std::max(from[next], next), best[next]});
    current = next;
  }
  return edges;
}

struct Dendrogram {
  // Nodes [0, m) are atoms; node m + i is the i-th merge.
  std::vector<std::size_t> left, right;
  std::vector<double> distance;
  std::vector<std::size_t> size;
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

Dendrogram single_linkage(const Atoms& atoms, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  const std::size_t m = atoms.value.size();
  Dendrogram tree;
  tree.size = atoms.weight;
  tree.left.assign(m, 0);
  tree.right.assign(m, 0);
  tree.distance.assign(m, 0.0);
  std::vector<std::size_t> parent(2 * m - 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (const Edge& e : edges) {
    const std::size_t ra = find_root(parent, e.a);
    const std::size_t rb = find_root(parent, e.b);
    const std::size_t node = tree.size.size();
    tree.left.push_back(ra);
    tree.right.push_back(rb);
    tree.distance.push_back(e.weight);
    tree.size.push_back(tree.size[ra] + tree.size[rb]);
    parent[ra] = node;
    parent[rb] = node;
  }
  return tree;
}

struct Condensed {
  std::vector<std::size_t> parent;  // parent cluster; root points at itself
  std::vector<double> birth;        // lambda at which the cluster appears
  std::vector<double> stability;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::size_t> exit_cluster;  // per atom: cluster it falls out of
};

Condensed condense(const Dendrogram& tree, const std::vector<double>& core, std::size_t m,
                   std::size_t min_cluster_size) {
  // Zero distances have infinite lambda; they are pinned above every finite
  // lambda so that stabilities stay finite and still rank such clusters first.
  double max_finite = 0.0;
  for (double d : tree.distance) {
    if (d > 0.0) max_finite = std::max(max_finite, 1.0 / d);
  }
  for (double c : core) {
    if (c > 0.0) max_finite = std::max(max_finite, 1.0 / c);
  }
  const double lambda_inf = max_finite > 0.0 ? 2.0 * max_finite : 1.0;
  auto lambda_of = [&](double d) { return d > 0.0 ? 1.0 / d : lambda_inf; };

  Condensed out;
  out.exit_cluster.assign(m, 0);
  auto new_cluster = [&](std::size_t parent, double birth) {
    out.parent.push_back(parent);
    out.birth.push_back(birth);
    out.stability.push_back(0.0);
    out.children.emplace_back();
    return out.parent.size() - 1;
  };
  new_cluster(0, 0.0);

  auto drop_subtree = [&](std::size_t node, std::size_t cluster, double lambda) {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      if (n < m) {
        out.exit_cluster[n] = cluster;
      } else {
        stack.push_back(tree.left[n]);
        stack.push_back(tree.right[n]);
      }
    }
    out.stability[cluster] +=
        static_cast<double>(tree.size[node]) * (lambda - out.birth[cluster]);
  };

  std::vector<std::pair<std::size_t, std::size_t>> work{{tree.size.size() - 1, 0}};
  while (!work.empty()) {
    const auto [node, cluster] = work.back();
    work.pop_back();
    if (node < m) {
      drop_subtree(node, cluster, lambda_of(core[node]));
      continue;
    }
    const double lambda = lambda_of(tree.distance[node]);
    const std::size_t l = tree.left[node];
    const std::size_t r = tree.right[node];
    const bool big_l = tree.size[l] >= min_cluster_size;
    const bool big_r = tree.size[r] >= min_cluster_size;
    if (big_l && big_r) {
      out.stability[cluster] +=
          static_cast<double>(tree.size[node]) * (lambda - out.birth[cluster]);
      for (std::size_t child : {l, r}) {
        const std::size_t id = new_cluster(cluster, lambda);
        out.children[cluster].push_back(id);
        work.emplace_back(child, id);
      }
    } else if (big_l) {
      drop_subtree(r, cluster, lambda);
      work.emplace_back(l, cluster);
    } else if (big_r) {
      drop_subtree(l, cluster, lambda);
      work.emplace_back(r, cluster);
    } else {
      drop_subtree(l, cluster, lambda);
      drop_subtree(r, cluster, lambda);
    }
  }
  return out;
}

// Excess of mass. Children are created after their parent, so a reverse scan
// sees every child first.
std::vector<bool> select_clusters(const Condensed& tree) {
  const std::size_t k = tree.parent.size();
  std::vector<bool> selected(k, false);
  if (k == 1) {
    selected[0] = true;
    return selected;
  }
  std::vector<double> score(k, 0.0);
  for (std::size_t c = k; c-- > 1;) {
    double children = 0.0;
    for (std::size_t ch : tree.children[c]) children += score[ch];
    if (!tree.children[c].empty() && children >= tree.stability[c]) {
      score[c] = children;
    } else {
      score[c] = tree.stability[c];
      selected[c] = true;
    }
  }
  // Keep only the topmost selections.
  for (std::size_t c = 1; c < k; ++c) {
    for (std::size_t a = tree.parent[c]; a != 0; a = tree.parent[a]) {
      if (selected[a]) {
        selected[c] = false;
        break;
      }
    }
  }
  return selected;
}

}  // namespace

Clustering hdbscan_1d(std::span<const std::int64_t> points, const HdbscanParams& params) {
  if (params.min_cluster_size < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_cluster_size must be at least 1");
  }
  if (points.size() < params.min_cluster_size || points.empty()) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(points.size()) +
                                             " points, min_cluster_size " +
                                             std::to_string(params.min_cluster_size));
  }
  if (!(params.resolution >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "resolution must be non-negative");
  }
  const std::size_t k = std::min(params.effective_min_samples(), points.size());

  const Atoms atoms = make_atoms(points);
  const std::size_t m = atoms.value.size();
  const auto core = core_distances(atoms, k, params.resolution);
  const Dendrogram tree = single_linkage(atoms, minimum_spanning_tree(atoms, core));
  const Condensed condensed = condense(tree, core, m, params.min_cluster_size);
  const std::vector<bool> selected = select_clusters(condensed);

  // Resolve each condensed cluster to its selected ancestor (or itself).
  const std::size_t k_clusters = condensed.parent.size();
  std::vector<int> owner(k_clusters, kNoise);
  for (std::size_t c = 0; c < k_clusters; ++c) {
    for (std::size_t a = c;; a = condensed.parent[a]) {
      if (selected[a]) {
        owner[c] = static_cast<int>(a);
        break;
      }
      if (a == 0) break;
    }
  }
  // Atoms are in value order, so first appearance gives ids ordered by minimum.
  std::vector<int> relabel(k_clusters, kNoise);
  int next_id = 0;
  std::vector<int> atom_label(m, kNoise);
  for (std::size_t j = 0; j < m; ++j) {
    const int o = owner[condensed.exit_cluster[j]];
    if (o == kNoise) continue;
    if (relabel[o] == kNoise) relabel[o] = next_id++;
    atom_label[j] = relabel[o];
  }

  Clustering result;
  result.params = params;
  result.n_clusters = next_id;
  result.labels.reserve(points.size());
  for (std::int64_t p : points) {
    const auto it = std::lower_bound(atoms.value.begin(), atoms.value.end(), p);
    result.labels.push_back(atom_label[static_cast<std::size_t>(it - atoms.value.begin())]);
  }
  return result;
}

}  // namespace eventrail
