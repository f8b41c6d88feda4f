#include "onoma/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "onoma/error.hpp"
#include "onoma/io.hpp"

namespace onoma::cluster {

void Dendrogram::validate() const {
  const std::size_t n = leaves.size();
  if (n == 0) throw InvariantError("dendrogram without leaves");
  if (merges.size() != n - 1) throw InvariantError("dendrogram must have n-1 merges");
  std::vector<bool> used(2 * n - 1, false);
  for (std::size_t s = 0; s < merges.size(); ++s) {
    const Merge& m = merges[s];
    if (m.new_node != n + s) throw InvariantError("merge nodes out of sequence");
    if (m.node_a >= m.node_b || m.node_b >= m.new_node) {
      throw InvariantError("merge references an unborn node");
    }
    if (used[m.node_a] || used[m.node_b]) throw InvariantError("node merged twice");
    used[m.node_a] = used[m.node_b] = true;
  }
}

Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage,
                       std::vector<std::string> leaves) {
  const std::size_t n = distances.n;
  if (leaves.size() != n) throw InputError("leaf labels do not match matrix size");
  if (n == 0) throw InputError("cannot cluster an empty set");
  for (double v : distances.values) {
    if (!std::isfinite(v)) throw InputError("non-finite dissimilarity");
  }

  // Ward runs the recurrence on squared distances.
  DistanceMatrix d = distances;
  if (linkage == Linkage::ward) {
    for (double& v : d.values) v *= v;
  }

  std::vector<std::size_t> node(n);  // slot -> current node id
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);
  std::iota(node.begin(), node.end(), std::size_t{0});

  Dendrogram out;
  out.leaves = std::move(leaves);
  out.merges.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = n, bj = n;
    std::pair<std::size_t, std::size_t> best_ids{SIZE_MAX, SIZE_MAX};
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double v = d(i, j);
        const std::pair<std::size_t, std::size_t> ids = std::minmax(node[i], node[j]);
        if (v < best || (v == best && ids < best_ids)) {
          best = v;
          best_ids = ids;
          bi = i;
          bj = j;
        }
      }
    }

    const double ni = static_cast<double>(size[bi]);
    const double nj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      double merged = 0.0;
      if (linkage == Linkage::ward) {
        const double nk = static_cast<double>(size[k]);
        merged = ((ni + nk) * d(k, bi) + (nj + nk) * d(k, bj) - nk * d(bi, bj)) /
                 (ni + nj + nk);
      } else {
        merged = (ni * d(k, bi) + nj * d(k, bj)) / (ni + nj);
      }
      d(k, bi) = d(bi, k) = merged;
    }

    Merge m;
    m.node_a = best_ids.first;
    m.node_b = best_ids.second;
    m.height = linkage == Linkage::ward ? std::sqrt(std::max(best, 0.0)) : best;
    m.new_node = n + step;
    m.size = size[bi] + size[bj];
    out.merges.push_back(m);

    node[bi] = m.new_node;
    size[bi] = m.size;
    active[bj] = false;
  }
  return out;
}

namespace {

double row_distance(std::span<const double> rows, std::size_t n_cols, std::size_t i,
                    std::size_t j) {
  const double* a = rows.data() + i * n_cols;
  const double* b = rows.data() + j * n_cols;
  double acc = 0.0;
  for (std::size_t c = 0; c < n_cols; ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

DistanceMatrix euclidean_distances(std::span<const double> rows, std::size_t n_rows,
                                   std::size_t n_cols) {
  DistanceMatrix d{n_rows, std::vector<double>(n_rows * n_rows, 0.0)};
  const auto n = static_cast<std::ptrdiff_t>(n_rows);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = i + 1; j < n_rows; ++j) {
      const double v = row_distance(rows, n_cols, i, j);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

DistanceMatrix euclidean_distances_serial(std::span<const double> rows, std::size_t n_rows,
                                          std::size_t n_cols) {
  DistanceMatrix d{n_rows, std::vector<double>(n_rows * n_rows, 0.0)};
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = i + 1; j < n_rows; ++j) {
      d(i, j) = d(j, i) = row_distance(rows, n_cols, i, j);
    }
  }
  return d;
}

std::vector<std::size_t> leaf_order(const Dendrogram& dendrogram) {
  const std::size_t n = dendrogram.leaf_count();
  std::vector<std::size_t> order;
  if (n == 0) return order;
  order.reserve(n);
  std::vector<std::size_t> stack{2 * n - 2};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (node < n) {
      order.push_back(node);
      continue;
    }
    const Merge& m = dendrogram.merges[node - n];
    stack.push_back(m.node_b);
    stack.push_back(m.node_a);
  }
  return order;
}

std::vector<std::size_t> cut(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.leaf_count();
  if (k < 1 || k > n) {
    throw ConfigError("cluster count must be in [1, " + std::to_string(n) + "], got " +
                      std::to_string(k));
  }
  // Union-find over all 2n-1 nodes; applying the first n-k merges leaves k roots.
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s < n - k; ++s) {
    const Merge& m = dendrogram.merges[s];
    parent[find(m.node_a)] = m.new_node;
    parent[find(m.node_b)] = m.new_node;
  }
  std::vector<std::size_t> label(n);
  std::vector<std::size_t> root_label(2 * n - 1, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t r = find(leaf);
    if (root_label[r] == SIZE_MAX) root_label[r] = next++;
    label[leaf] = root_label[r];
  }
  return label;
}

void write_dendrogram(std::ostream& out, const Dendrogram& dendrogram) {
  for (std::size_t i = 0; i < dendrogram.leaves.size(); ++i) {
    out << "# leaf\t" << i << '\t' << dendrogram.leaves[i] << '\n';
  }
  for (const Merge& m : dendrogram.merges) {
    out << m.node_a << '\t' << m.node_b << '\t' << io::format_exact(m.height) << '\t'
        << m.new_node << '\n';
  }
}

}  // namespace onoma::cluster
