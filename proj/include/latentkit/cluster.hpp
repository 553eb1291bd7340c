#pragma once

#include "latentkit/types.hpp"

#include <string>
#include <vector>

namespace latentkit {

enum class CosineMetric {
  kOneMinusAbs,  // 1 - |cos|, sign-invariant (default)
  kAbsOneMinus,  // |1 - cos|
};

struct DissimilarityMatrix {
  Matrix data;  // P x P, symmetric, zero diagonal
  std::string metric_tag;
};

/// Pairwise dissimilarity between the columns of a d x P matrix.
DissimilarityMatrix abs_cosine_dissimilarity(const Matrix& vectors,
                                             CosineMetric metric = CosineMetric::kOneMinusAbs);

struct Merge {
  int a = 0, b = 0;     // cluster ids, a < b; leaves 0..P-1, internal P..2P-2
  double height = 0.0;
  int size = 0;         // members of the merged cluster
};

struct Dendrogram {
  std::vector<Merge> merges;  // exactly P-1 entries
  int leaf_count = 0;
};

/// Agglomerative clustering with the Ward variance-minimization update
/// applied through the Lance-Williams recurrence. At each step the pair at
/// minimum current distance merges; ties go to the lexicographically
/// smallest (a, b) id pair.
Dendrogram ward_linkage(const DissimilarityMatrix& dist);

/// Flat labels from undoing the last k-1 merges. Labels 0..k-1 are assigned
/// in order of first leaf appearance.
std::vector<int> cut_clusters(const Dendrogram& dendro, int k);

/// P x Q matrix of |cos| between columns of a and b.
Matrix cross_similarity(const Matrix& a, const Matrix& b);

}  // namespace latentkit
