// Timing comparison of the OpenMP kernels against their serial reference
// implementations: finite-difference metric assembly and the n=1
// normalization Monte Carlo.

#include "sjd/domains.hpp"
#include "sjd/kahler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>

namespace {

double now_seconds() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
#endif
}

}  // namespace

int main(int argc, char** argv) {
  const int n = (argc > 1) ? std::atoi(argv[1]) : 4;
  const std::int64_t samples = (argc > 2) ? std::atoll(argv[2]) : 2'000'000;
  const double k = 6.0;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif

  const sjd::JacobiBallPoint x = sjd::random_jacobi_ball_point(n, 7, 0.3);

  double t0 = now_seconds();
  const sjd::MetricMatrix serial = sjd::metric_reference(x, k);
  double t1 = now_seconds();
  const sjd::MetricMatrix parallel = sjd::metric(x, k);
  double t2 = now_seconds();
  const double metric_diff = (serial.G - parallel.G).cwiseAbs().maxCoeff();
  std::printf("metric n=%d (N=%ld): serial %.3fs, parallel %.3fs, speedup %.2fx, "
              "max diff %.3e\n",
              n, static_cast<long>(serial.G.rows()), t1 - t0, t2 - t1,
              (t1 - t0) / (t2 - t1), metric_diff);

  t0 = now_seconds();
  const double mc_serial = sjd::mc_inverse_lambda1_reference(5.0, samples, 42);
  t1 = now_seconds();
  const double mc_parallel = sjd::mc_inverse_lambda1(5.0, samples, 42);
  t2 = now_seconds();
  std::printf("mc %lld samples: serial %.3fs, parallel %.3fs, speedup %.2fx, "
              "diff %.3e (estimate %.9f, target pi^2 = %.9f)\n",
              static_cast<long long>(samples), t1 - t0, t2 - t1,
              (t1 - t0) / (t2 - t1), mc_serial - mc_parallel, mc_parallel,
              9.869604401089358);
  return 0;
}
