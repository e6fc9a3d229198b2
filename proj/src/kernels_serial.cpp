#include <algorithm>

#include "rlcm/kernels.hpp"

namespace rlcm::kernels::serial {

void tmatrix_rows(std::span<const double> theta, int J, std::size_t C, std::span<double> out) {
    const std::size_t R = pow2(J);
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t a = 0; a < C; ++a) {
            double t = 1.0;
            for (int j = 0; j < J; ++j)
                if (r >> j & 1) t *= theta[j * C + a];
            out[r * C + a] = t;
        }
    }
}

void response_distribution(std::span<const double> theta, int J, std::size_t C,
                           std::span<const double> p, std::span<double> out) {
    const std::size_t R = pow2(J);
    for (std::size_t r = 0; r < R; ++r) {
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
    for (std::size_t u = 0; u < patterns.size(); ++u) {
        const Code r = patterns[u];
        for (std::size_t a = 0; a < C; ++a) {
            double joint = 1.0;
            for (int j = 0; j < J; ++j) {
                double t = std::clamp(theta[j * C + a], clamp, 1.0 - clamp);
                joint *= (r >> j & 1) ? t : 1.0 - t;
            }
            out[u * C + a] = joint;
        }
    }
}

void superset_sums(std::span<double> f, int J) {
    const Code R = static_cast<Code>(pow2(J));
    std::vector<double> in(f.begin(), f.end());
    for (Code r = 0; r < R; ++r) {
        double s = 0.0;
        for (Code x = 0; x < R; ++x)
            if (dominates(x, r)) s += in[x];
        f[r] = s;
    }
}

void superset_mobius(std::span<double> f, int J) {
    const Code R = static_cast<Code>(pow2(J));
    std::vector<double> in(f.begin(), f.end());
    for (Code r = 0; r < R; ++r) {
        double s = 0.0;
        for (Code x = 0; x < R; ++x)
            if (dominates(x, r)) s += ((popcount(x) - popcount(r)) & 1 ? -1.0 : 1.0) * in[x];
        f[r] = s;
    }
}

void shift_transform(std::span<double> table, int J, std::size_t C, std::span<const double> shift) {
    const Code R = static_cast<Code>(pow2(J));
    std::vector<double> in(table.begin(), table.end());
    for (Code r = 0; r < R; ++r) {
        for (std::size_t a = 0; a < C; ++a) table[r * C + a] = 0.0;
        // every sub-pattern of r, including 0 and r itself
        for (Code sub = r;; sub = (sub - 1) & r) {
            double coef = 1.0;
            Code rest = r & ~sub;
            for (int j = 0; j < J; ++j)
                if (rest >> j & 1) coef *= -shift[j];
            for (std::size_t a = 0; a < C; ++a) table[r * C + a] += coef * in[sub * C + a];
            if (sub == 0) break;
        }
    }
}

}  // namespace rlcm::kernels::serial
