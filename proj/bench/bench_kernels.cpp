// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against the serial reference implementations and
// checks that both produce the same values.  Build and run:
//   cmake --build build --target bench_kernels && ./build/bench/bench_kernels

#include "mlpriv/privacy.hpp"
#include "mlpriv/reference.hpp"
#include "mlpriv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace mlpriv;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        fn();
        best = std::min(best, now() - t0);
    }
    return best;
}

void report(const std::string& name, double serial, double parallel, double max_dev) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   |dev| %.1e\n",
                name.c_str(), serial * 1e3, parallel * 1e3, serial / parallel, max_dev);
}

}  // namespace

int main() {
    const Index n = 300, L = 8, K = 4;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    const Synthetic syn = generate_synthetic(n, K, L, 7);
    const Tensor3 prob = probability_tensor(syn.params);
    const PrivacyProfile profile = PrivacyProfile::constant(n, 0.8);
    const FlipMatrix theta = flip_matrix(profile);

    rng::Substream s(1, rng::Purpose::kGeneric, 0);
    Tensor3 t(n, n, L);
    for (Index i = 0; i < t.size(); ++i) t.data()[i] = s.uniform(-1.0, 1.0);
    Matrix m(K, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < K; ++i) m(i, j) = s.uniform(-1.0, 1.0);

    {
        Matrix a, b;
        const double ts = time_best_of(3, [&] { a = ref::matricize(t, 2); });
        const double tp = time_best_of(3, [&] { b = matricize(t, 2); });
        report("matricize mode 2", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    for (int mode = 1; mode <= 3; ++mode) {
        Tensor3 a, b;
        const double ts = time_best_of(3, [&] { a = ref::mode_product(t, m, mode); });
        const double tp = time_best_of(3, [&] { b = mode_product(t, m, mode); });
        report("mode product " + std::to_string(mode), ts, tp,
               (a.flat() - b.flat()).cwiseAbs().maxCoeff());
    }
    {
        Tensor3 a, b;
        const double ts = time_best_of(3, [&] { a = ref::probability_tensor(syn.params); });
        const double tp = time_best_of(3, [&] { b = probability_tensor(syn.params); });
        report("probability tensor", ts, tp, (a.flat() - b.flat()).cwiseAbs().maxCoeff());
    }
    {
        MultiLayerNetwork a, b;
        const double ts = time_best_of(3, [&] { a = ref::sample_network(prob, 5); });
        const double tp = time_best_of(3, [&] { b = sample_network(prob, 5); });
        report("sample network", ts, tp,
               (a.adjacency.flat() - b.adjacency.flat()).cwiseAbs().maxCoeff());
    }
    {
        MultiLayerNetwork a, b;
        const double ts = time_best_of(3, [&] { a = ref::flip_network(syn.network, theta, 9); });
        const double tp = time_best_of(3, [&] { b = flip_network(syn.network, theta, 9); });
        report("flip network", ts, tp,
               (a.adjacency.flat() - b.adjacency.flat()).cwiseAbs().maxCoeff());
    }
    {
        DebiasedTensor a, b;
        const double ts = time_best_of(3, [&] { a = ref::debias(syn.network, profile); });
        const double tp = time_best_of(3, [&] { b = debias(syn.network, profile); });
        report("debias", ts, tp, (a.values.flat() - b.values.flat()).cwiseAbs().maxCoeff());
    }
    return 0;
}
