#include "latentkit/kernels.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace latentkit {

namespace {
std::atomic<int> g_threads{1};
}

int max_threads() { return g_threads.load(); }

void set_max_threads(int n) {
#ifdef _OPENMP
  if (n <= 0) n = omp_get_max_threads();
#else
  if (n <= 0) n = 1;
#endif
  g_threads.store(n < 1 ? 1 : n);
}

namespace kernels {

namespace {

// Row i of the Gram matrix, entries j >= i only. Fixed sample order keeps
// the reduction bit-reproducible.
inline void gram_row(const Matrix& a, Index i, double* out_row) {
  const Index n = a.rows(), d = a.cols();
  for (Index j = i; j < d; ++j) out_row[j] = 0.0;
  for (Index r = 0; r < n; ++r) {
    const double* ar = a.data() + r * d;
    const double w = ar[i];
    for (Index j = i; j < d; ++j) out_row[j] += w * ar[j];
  }
}

inline void multiply_row(const Matrix& a, const Matrix& b, Index i, double* out_row) {
  const Index k = a.cols(), n = b.cols();
  for (Index j = 0; j < n; ++j) out_row[j] = 0.0;
  const double* ai = a.data() + i * k;
  for (Index l = 0; l < k; ++l) {
    const double w = ai[l];
    const double* bl = b.data() + l * n;
    for (Index j = 0; j < n; ++j) out_row[j] += w * bl[j];
  }
}

inline void at_b_row(const Matrix& a, const Matrix& b, Index i, double* out_row) {
  const Index m = a.rows(), k = a.cols(), n = b.cols();
  for (Index j = 0; j < n; ++j) out_row[j] = 0.0;
  for (Index r = 0; r < m; ++r) {
    const double w = a.data()[r * k + i];
    const double* br = b.data() + r * n;
    for (Index j = 0; j < n; ++j) out_row[j] += w * br[j];
  }
}

inline void a_bt_row(const Matrix& a, const Matrix& b, Index i, double* out_row) {
  const Index k = a.cols(), n = b.rows();
  const double* ai = a.data() + i * k;
  for (Index j = 0; j < n; ++j) {
    const double* bj = b.data() + j * k;
    double acc = 0.0;
    for (Index l = 0; l < k; ++l) acc += ai[l] * bj[l];
    out_row[j] = acc;
  }
}

void mirror_lower(Matrix& m) {
  const Index d = m.rows();
  for (Index i = 1; i < d; ++i)
    for (Index j = 0; j < i; ++j) m(i, j) = m(j, i);
}

}  // namespace

Matrix gram_serial(const Matrix& a) {
  const Index d = a.cols();
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i) gram_row(a, i, out.data() + i * d);
  mirror_lower(out);
  return out;
}

Matrix gram_parallel(const Matrix& a, int threads) {
  const Index d = a.cols();
  Matrix out(d, d);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (Index i = 0; i < d; ++i) gram_row(a, i, out.data() + i * d);
  mirror_lower(out);
  return out;
}

Matrix gram(const Matrix& a) {
  const int t = max_threads();
  return t > 1 ? gram_parallel(a, t) : gram_serial(a);
}

Matrix multiply_serial(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) multiply_row(a, b, i, out.data() + i * b.cols());
  return out;
}

Matrix multiply_parallel(const Matrix& a, const Matrix& b, int threads) {
  require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (Index i = 0; i < a.rows(); ++i) multiply_row(a, b, i, out.data() + i * b.cols());
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const int t = max_threads();
  return t > 1 ? multiply_parallel(a, b, t) : multiply_serial(a, b);
}

Matrix multiply_at_b_serial(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "multiply_at_b: row counts differ");
  Matrix out(a.cols(), b.cols());
  for (Index i = 0; i < a.cols(); ++i) at_b_row(a, b, i, out.data() + i * b.cols());
  return out;
}

Matrix multiply_at_b_parallel(const Matrix& a, const Matrix& b, int threads) {
  require(a.rows() == b.rows(), "multiply_at_b: row counts differ");
  Matrix out(a.cols(), b.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (Index i = 0; i < a.cols(); ++i) at_b_row(a, b, i, out.data() + i * b.cols());
  return out;
}

Matrix multiply_at_b(const Matrix& a, const Matrix& b) {
  const int t = max_threads();
  return t > 1 ? multiply_at_b_parallel(a, b, t) : multiply_at_b_serial(a, b);
}

Matrix multiply_a_bt_serial(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "multiply_a_bt: column counts differ");
  Matrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) a_bt_row(a, b, i, out.data() + i * b.rows());
  return out;
}

Matrix multiply_a_bt_parallel(const Matrix& a, const Matrix& b, int threads) {
  require(a.cols() == b.cols(), "multiply_a_bt: column counts differ");
  Matrix out(a.rows(), b.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (Index i = 0; i < a.rows(); ++i) a_bt_row(a, b, i, out.data() + i * b.rows());
  return out;
}

Matrix multiply_a_bt(const Matrix& a, const Matrix& b) {
  const int t = max_threads();
  return t > 1 ? multiply_a_bt_parallel(a, b, t) : multiply_a_bt_serial(a, b);
}

}  // namespace kernels
}  // namespace latentkit
