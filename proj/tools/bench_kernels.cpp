// Benchmark of the OpenMP kernels against their serial references.
// Prints one line per kernel and size with both timings and the speedup.
#include <omp.h>

#include <cstdio>
#include <random>

#include <qseq/cone.hpp>
#include <qseq/kernels.hpp>
#include <qseq/operator.hpp>

using namespace qseq;
using kernels::Matrix;
using kernels::Vector;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
  return 0.5 * (g + g.adjoint()).eval();
}

Vector random_unit(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = Cplx(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = omp_get_wtime();
    f();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

void row(const char* name, long size, double serial, double parallel,
         double check) {
  std::printf("%-22s n=%-6ld serial %10.4f ms   parallel %10.4f ms   x%.2f   (dev %.2e)\n",
              name, size, serial * 1e3, parallel * 1e3,
              serial / parallel, check);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::mt19937_64 rng(12345);

  // Kronecker product
  for (long n : {32L, 64L}) {
    const Matrix a = random_hermitian(rng, n);
    const Matrix b = random_hermitian(rng, n);
    Matrix out_p, out_s;
    const double tp = time_best_of(3, [&] { out_p = kernels::kron(a, b); });
    const double ts = time_best_of(3, [&] { out_s = kernels::ref::kron(a, b); });
    row("kron", n * n, ts, tp, (out_p - out_s).cwiseAbs().maxCoeff());
  }

  // Subsystem permutation (two-step regrouping of an m=2 operator)
  for (long d : {32L, 64L}) {
    const long n = d * d;
    const Matrix a = random_hermitian(rng, n);
    const auto perm = kernels::factor_permutation({d, d}, std::vector<int>{1, 0});
    Matrix out_p, out_s;
    const double tp =
        time_best_of(3, [&] { out_p = kernels::apply_index_permutation(a, perm); });
    const double ts = time_best_of(
        3, [&] { out_s = kernels::ref::apply_index_permutation(a, perm); });
    row("permute", n, ts, tp, (out_p - out_s).cwiseAbs().maxCoeff());
  }

  // Product-state contraction
  for (long d : {8L, 16L}) {
    const std::vector<long> dims{d, d, d};
    const long n = d * d * d;
    const Matrix a = random_hermitian(rng, n);
    std::vector<Vector> vecs{random_unit(rng, d), random_unit(rng, d),
                             random_unit(rng, d)};
    Matrix out_p, out_s;
    const double tp = time_best_of(
        3, [&] { out_p = kernels::contract_except(a, dims, vecs, 1); });
    const double ts = time_best_of(
        3, [&] { out_s = kernels::ref::contract_except(a, dims, vecs, 1); });
    row("contract_except", n, ts, tp, (out_p - out_s).cwiseAbs().maxCoeff());
  }

  // Full see-saw (restarts run in parallel)
  {
    const HermitianOperator op =
        regroup_to_party_major(tensor(known_primitive_bp(2, 4),
                                      identity(PartyStructure::uniform(2, 4)) +
                                          16.0 * ghz(2, 4)));
    SeesawParams params;
    params.restarts = 32;
    const double tp = time_best_of(1, [&] { (void)seesaw_min_product(op, params); });
    std::printf("%-22s n=%-6ld 32 restarts %8.1f ms\n", "seesaw", op.dim(),
                tp * 1e3);
  }
  return 0;
}
