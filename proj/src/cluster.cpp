#include "latentkit/cluster.hpp"

#include <cmath>
#include <limits>

namespace latentkit {

namespace {

Vector column_norms_checked(const Matrix& vectors, const char* what) {
  Vector norms(vectors.cols());
  for (Index p = 0; p < vectors.cols(); ++p) {
    norms(p) = vectors.col(p).norm();
    require(norms(p) > 0.0, std::string(what) + ": zero-norm column");
  }
  return norms;
}

}  // namespace

DissimilarityMatrix abs_cosine_dissimilarity(const Matrix& vectors, CosineMetric metric) {
  const Index p = vectors.cols();
  require(p >= 1, "abs_cosine_dissimilarity: no columns");
  const Vector norms = column_norms_checked(vectors, "abs_cosine_dissimilarity");

  DissimilarityMatrix out;
  out.metric_tag = metric == CosineMetric::kOneMinusAbs ? "one_minus_abs_cosine" : "abs_one_minus_cosine";
  out.data.resize(p, p);
  for (Index i = 0; i < p; ++i) {
    out.data(i, i) = 0.0;
    for (Index j = i + 1; j < p; ++j) {
      const double c = vectors.col(i).dot(vectors.col(j)) / (norms(i) * norms(j));
      double v = metric == CosineMetric::kOneMinusAbs ? 1.0 - std::abs(c) : std::abs(1.0 - c);
      if (v < 0.0) v = 0.0;
      out.data(i, j) = out.data(j, i) = v;
    }
  }
  return out;
}

Dendrogram ward_linkage(const DissimilarityMatrix& dist) {
  const Index p = dist.data.rows();
  require(dist.data.cols() == p, "ward_linkage: dissimilarity matrix not square");
  require(p >= 2, "ward_linkage: need at least two items");
  for (Index i = 0; i < p; ++i) {
    require(dist.data(i, i) == 0.0, "ward_linkage: nonzero diagonal");
    for (Index j = i + 1; j < p; ++j) {
      require(std::isfinite(dist.data(i, j)), "ward_linkage: non-finite dissimilarity");
      require(std::abs(dist.data(i, j) - dist.data(j, i)) <= 1e-12,
              "ward_linkage: matrix not symmetric");
      require(dist.data(i, j) >= 0.0, "ward_linkage: negative dissimilarity");
    }
  }

  Matrix work = dist.data;
  std::vector<int> id(p);
  std::vector<double> size(p, 1.0);
  std::vector<char> alive(p, 1);
  for (Index i = 0; i < p; ++i) id[i] = static_cast<int>(i);

  Dendrogram dendro;
  dendro.leaf_count = static_cast<int>(p);
  dendro.merges.reserve(p - 1);

  for (Index step = 0; step + 1 < p; ++step) {
    Index bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    int best_a = 0, best_b = 0;
    for (Index i = 0; i < p; ++i) {
      if (!alive[i]) continue;
      for (Index j = i + 1; j < p; ++j) {
        if (!alive[j]) continue;
        const double dij = work(i, j);
        const int a = std::min(id[i], id[j]), b = std::max(id[i], id[j]);
        if (dij < best || (dij == best && (a < best_a || (a == best_a && b < best_b)))) {
          best = dij;
          bi = i;
          bj = j;
          best_a = a;
          best_b = b;
        }
      }
    }

    const double ni = size[bi], nj = size[bj], dij = work(bi, bj);
    for (Index k = 0; k < p; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      const double nk = size[k];
      const double dki = work(k, bi), dkj = work(k, bj);
      const double num =
          (ni + nk) * (dki * dki) + (nj + nk) * (dkj * dkj) - nk * (dij * dij);
      const double merged = std::sqrt(std::max(num, 0.0) / (ni + nj + nk));
      work(k, bi) = work(bi, k) = merged;
    }
    dendro.merges.push_back({best_a, best_b, dij,
                             static_cast<int>(ni + nj)});
    size[bi] = ni + nj;
    alive[bj] = 0;
    id[bi] = static_cast<int>(p + step);
  }
  return dendro;
}

std::vector<int> cut_clusters(const Dendrogram& dendro, int k) {
  const int p = dendro.leaf_count;
  require(k >= 1 && k <= p, "cut_clusters: k out of range");
  require(static_cast<int>(dendro.merges.size()) == p - 1,
          "cut_clusters: malformed dendrogram");

  // Apply the first P-k merges, leaving k groups.
  std::vector<int> parent(2 * p - 1);
  for (int i = 0; i < 2 * p - 1; ++i) parent[i] = i;
  for (int m = 0; m < p - k; ++m) {
    parent[dendro.merges[m].a] = p + m;
    parent[dendro.merges[m].b] = p + m;
  }
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  std::vector<int> labels(p);
  std::vector<int> label_of_root(2 * p - 1, -1);
  int next = 0;
  for (int leaf = 0; leaf < p; ++leaf) {
    const int r = root(leaf);
    if (label_of_root[r] < 0) label_of_root[r] = next++;
    labels[leaf] = label_of_root[r];
  }
  return labels;
}

Matrix cross_similarity(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "cross_similarity: dimension mismatch");
  const Vector na = column_norms_checked(a, "cross_similarity");
  const Vector nb = column_norms_checked(b, "cross_similarity");
  Matrix out(a.cols(), b.cols());
  for (Index i = 0; i < a.cols(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      out(i, j) = std::abs(a.col(i).dot(b.col(j))) / (na(i) * nb(j));
  return out;
}

}  // namespace latentkit
