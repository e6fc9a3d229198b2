#include <algorithm>
#include <cstdint>

#include "rlcm/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rlcm::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace parallel {

void tmatrix_rows(std::span<const double> theta, int J, std::size_t C, std::span<double> out) {
    std::fill(out.begin(), out.begin() + C, 1.0);
    for (int j = 0; j < J; ++j) {
        const std::int64_t half = static_cast<std::int64_t>(pow2(j));
        const double* item = theta.data() + j * C;
        double* base = out.data();
#pragma omp parallel for schedule(static) if (half * static_cast<std::int64_t>(C) > 4096)
        for (std::int64_t r = 0; r < half; ++r) {
            const double* src = base + r * C;
            double* dst = base + (r + half) * C;
            for (std::size_t a = 0; a < C; ++a) dst[a] = src[a] * item[a];
        }
    }
}

void response_distribution(std::span<const double> theta, int J, std::size_t C,
                           std::span<const double> p, std::span<double> out) {
    const std::int64_t R = static_cast<std::int64_t>(pow2(J));
#pragma omp parallel for schedule(static) if (R * static_cast<std::int64_t>(C) > 4096)
    for (std::int64_t r = 0; r < R; ++r) {
        double total = 0.0;
        for (std::size_t a = 0; a < C; ++a) {
            double joint = 1.0;
            for (int j = 0; j < J; ++j) {
                double t = theta[j * C + a];
                joint *= (r >> j & 1) ? t : 1.0 - t;
            }
            total += joint * p[a];
        }
        out[r] = total;
    }
}

void pattern_likelihoods(std::span<const Code> patterns, std::span<const double> theta, int J,
                         std::size_t C, double clamp, std::span<double> out) {
    std::vector<double> on(J * C), off(J * C);
    for (std::size_t i = 0; i < on.size(); ++i) {
        on[i] = std::clamp(theta[i], clamp, 1.0 - clamp);
        off[i] = 1.0 - on[i];
    }
    const std::int64_t n = static_cast<std::int64_t>(patterns.size());
#pragma omp parallel for schedule(static) if (n * static_cast<std::int64_t>(C) > 4096)
    for (std::int64_t u = 0; u < n; ++u) {
        const Code r = patterns[u];
        double* row = out.data() + u * C;
        std::fill(row, row + C, 1.0);
        for (int j = 0; j < J; ++j) {
            const double* f = (r >> j & 1) ? on.data() + j * C : off.data() + j * C;
            for (std::size_t a = 0; a < C; ++a) row[a] *= f[a];
        }
    }
}

namespace {

// For each bit, combine f[r] with f[r | bit] over all r lacking that bit.
template <class Op>
void butterfly_supersets(std::span<double> f, int J, Op op) {
    const std::int64_t R = static_cast<std::int64_t>(pow2(J));
    for (int j = 0; j < J; ++j) {
        const std::int64_t bit = std::int64_t{1} << j;
#pragma omp parallel for schedule(static) if (R > 8192)
        for (std::int64_t r = 0; r < R; ++r)
            if (!(r & bit)) f[r] = op(f[r], f[r | bit]);
    }
}

}  // namespace

void superset_sums(std::span<double> f, int J) {
    butterfly_supersets(f, J, [](double a, double b) { return a + b; });
}

void superset_mobius(std::span<double> f, int J) {
    butterfly_supersets(f, J, [](double a, double b) { return a - b; });
}

void shift_transform(std::span<double> table, int J, std::size_t C, std::span<const double> shift) {
    // The transform factors into commuting per-item maps: row r <- row r - shift_j row (r \ j)
    // for every r containing j.
    const std::int64_t R = static_cast<std::int64_t>(pow2(J));
    for (int j = 0; j < J; ++j) {
        const std::int64_t bit = std::int64_t{1} << j;
        const double c = shift[j];
        if (c == 0.0) continue;
#pragma omp parallel for schedule(static) if (R * static_cast<std::int64_t>(C) > 8192)
        for (std::int64_t r = 0; r < R; ++r) {
            if (!(r & bit)) continue;
            double* dst = table.data() + r * C;
            const double* src = table.data() + (r ^ bit) * C;
            for (std::size_t a = 0; a < C; ++a) dst[a] -= c * src[a];
        }
    }
}

}  // namespace parallel
}  // namespace rlcm::kernels
