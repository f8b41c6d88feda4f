#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace onoma::cluster {

enum class Linkage {
  ward,     // minimum variance; input must be Euclidean distances
  average,  // UPGMA on an arbitrary dissimilarity
};

/// One agglomeration step. Leaves are nodes 0..n-1; the merge at step s
/// creates node n+s. node_a < node_b always.
struct Merge {
  std::size_t node_a = 0;
  std::size_t node_b = 0;
  double height = 0.0;
  std::size_t new_node = 0;
  std::size_t size = 0;  // leaves under new_node
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;

  std::size_t leaf_count() const { return leaves.size(); }

  /// Checks the structural invariants: n-1 merges, each node consumed once,
  /// node numbering. Throws InvariantError.
  void validate() const;
};

/// Square symmetric matrix stored row-major.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

/// Lance–Williams agglomeration. Among equally close pairs the one with the
/// smallest (node_a, node_b) wins. Throws InputError on non-finite input.
Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage,
                       std::vector<std::string> leaves);

/// Pairwise Euclidean distances between the rows of a row-major matrix,
/// one OpenMP task per row.
DistanceMatrix euclidean_distances(std::span<const double> rows, std::size_t n_rows,
                                   std::size_t n_cols);

/// Single-threaded reference for euclidean_distances.
DistanceMatrix euclidean_distances_serial(std::span<const double> rows, std::size_t n_rows,
                                          std::size_t n_cols);

/// Leaves in left-to-right order (node_a subtree before node_b subtree).
std::vector<std::size_t> leaf_order(const Dendrogram& dendrogram);

/// Cluster index per leaf after undoing the k-1 last merges. Clusters are
/// numbered by their smallest leaf index.
std::vector<std::size_t> cut(const Dendrogram& dendrogram, std::size_t k);

/// `node_a<TAB>node_b<TAB>height<TAB>new_node` per merge, preceded by
/// `# leaf<TAB>index<TAB>label` comment lines.
void write_dendrogram(std::ostream& out, const Dendrogram& dendrogram);

}  // namespace onoma::cluster
