// Timing harness comparing the serial reference kernels against the
// OpenMP paths, plus the two dominant end-to-end operations. Results are
// bit-identical by construction; this only reports speed.

#include "latentkit/core.hpp"
#include "latentkit/decorr.hpp"
#include "latentkit/jacobian.hpp"
#include "latentkit/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace latentkit;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warmup
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
             .count() /
         reps;
}

void row(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name.c_str(), serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 4;
  if (argc > 1) threads = std::atoi(argv[1]);
  std::printf("threads for parallel path: %d\n", threads);
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const Matrix a = sample_gaussian(4096, 256, RngSeed{1}).data;
  const Matrix b = sample_gaussian(256, 512, RngSeed{2}).data;
  const Matrix c = sample_gaussian(4096, 512, RngSeed{3}).data;
  const Matrix e = sample_gaussian(1024, 256, RngSeed{4}).data;

  row("gram 4096x256",
      time_ms([&] { kernels::gram_serial(a); }, 3),
      time_ms([&] { kernels::gram_parallel(a, threads); }, 3));
  row("multiply 4096x256x512",
      time_ms([&] { kernels::multiply_serial(a, b); }, 3),
      time_ms([&] { kernels::multiply_parallel(a, b, threads); }, 3));
  row("at_b 4096x256->256x512",
      time_ms([&] { kernels::multiply_at_b_serial(a, c); }, 3),
      time_ms([&] { kernels::multiply_at_b_parallel(a, c, threads); }, 3));
  row("a_bt 4096x256 x 1024x256",
      time_ms([&] { kernels::multiply_a_bt_serial(a, e); }, 3),
      time_ms([&] { kernels::multiply_a_bt_parallel(a, e, threads); }, 3));

  const auto batch = sample_gaussian(4096, 128, RngSeed{5});
  set_max_threads(1);
  const double grad_serial = time_ms([&] { decorr_grad(batch); }, 3);
  set_max_threads(threads);
  const double grad_parallel = time_ms([&] { decorr_grad(batch); }, 3);
  row("decorr_grad 4096x128", grad_serial, grad_parallel);

  const Matrix dw = sample_gaussian(8192, 32, RngSeed{6}).data;
  const Matrix targets = sample_gaussian(8192, 1024, RngSeed{7}).data;
  set_max_threads(1);
  const double jac_serial = time_ms([&] { build_jacobian(dw, targets); }, 3);
  set_max_threads(threads);
  const double jac_parallel = time_ms([&] { build_jacobian(dw, targets); }, 3);
  row("jacobian 8192x32 S=1024", jac_serial, jac_parallel);

  set_max_threads(1);
  return 0;
}
