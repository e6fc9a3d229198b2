#pragma once

// Shared generators and brute-force oracles for the test binaries. The oracles
// evaluate definitions directly and never call library kernels.

#include <cmath>
#include <random>
#include <vector>

#include "rlcm/core.hpp"
#include "rlcm/models.hpp"

namespace testsupport {

using rlcm::Code;

inline double unif(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline rlcm::ThetaMatrix random_theta(int J, int K, std::mt19937_64& rng) {
    std::vector<double> v(J * rlcm::pow2(K));
    for (double& x : v) x = unif(rng, 0.0, 1.0);
    return rlcm::ThetaMatrix(J, K, std::move(v));
}

inline rlcm::ProportionVector random_p(int K, std::mt19937_64& rng) {
    std::vector<double> v(rlcm::pow2(K));
    double s = 0;
    for (double& x : v) s += (x = unif(rng, 0.05, 1.0));
    for (double& x : v) x /= s;
    return rlcm::ProportionVector(v);
}

inline rlcm::QMatrix random_q(int J, int K, std::mt19937_64& rng) {
    std::vector<std::vector<int>> rows(J, std::vector<int>(K));
    for (auto& r : rows) {
        int sum = 0;
        for (int& x : r) sum += (x = static_cast<int>(rng() & 1));
        if (sum == 0) r[rng() % K] = 1;
    }
    return rlcm::QMatrix(rows);
}

// Valid, monotone parameters for one item and family.
inline rlcm::ItemParams random_item(rlcm::Family f, Code q, int K, std::mt19937_64& rng) {
    using namespace rlcm;
    switch (f) {
        case Family::DINA: return Dina{unif(rng, 0.05, 0.3), unif(rng, 0.05, 0.3)};
        case Family::DINO: return Dino{unif(rng, 0.05, 0.3), unif(rng, 0.05, 0.3)};
        case Family::GDINA: {
            // Nonnegative increments summing to at most 1 - g.
            Gdina gd;
            double g = unif(rng, 0.05, 0.25);
            gd.beta[0] = g;
            std::vector<Code> subsets;
            for (Code s = q; s; s = (s - 1) & q) subsets.push_back(s);
            double budget = unif(rng, 0.4, 0.9) - g;
            std::vector<double> w(subsets.size());
            double tot = 0;
            for (double& x : w) tot += (x = unif(rng, 0.1, 1.0));
            for (std::size_t i = 0; i < subsets.size(); ++i) gd.beta[subsets[i]] = budget * w[i] / tot;
            return gd;
        }
        case Family::LLM: {
            Llm l{unif(rng, -2.0, -1.0), std::vector<double>(K, 0.0)};
            for (int k = 0; k < K; ++k)
                if ((q >> k) & 1) l.beta[k] = unif(rng, 0.5, 2.5);
            return l;
        }
        case Family::RRUM: {
            Rrum r{unif(rng, 0.7, 0.95), std::vector<double>(K, 1.0)};
            for (int k = 0; k < K; ++k)
                if ((q >> k) & 1) r.r[k] = unif(rng, 0.1, 0.6);
            return r;
        }
    }
    return rlcm::Dina{0.2, 0.1};
}

inline std::vector<rlcm::ItemParams> random_params(const rlcm::QMatrix& Q, rlcm::Family f, std::mt19937_64& rng) {
    std::vector<rlcm::ItemParams> out;
    for (int j = 0; j < Q.items(); ++j) out.push_back(random_item(f, Q.row(j), Q.attributes(), rng));
    return out;
}

// P(R = r | alpha) as a product of Bernoulli factors.
inline double oracle_point(const rlcm::ThetaMatrix& th, Code alpha, Code r) {
    double v = 1.0;
    for (int j = 0; j < th.items(); ++j) v *= ((r >> j) & 1) ? th(j, alpha) : 1.0 - th(j, alpha);
    return v;
}

// P(R >= r | alpha) summed over dominating patterns.
inline double oracle_marginal(const rlcm::ThetaMatrix& th, Code alpha, Code r) {
    double v = 0.0;
    for (Code rp = 0; rp < rlcm::pow2(th.items()); ++rp)
        if ((rp & r) == r) v += oracle_point(th, alpha, rp);
    return v;
}

inline std::vector<double> oracle_distribution(const rlcm::ThetaMatrix& th, const rlcm::ProportionVector& p) {
    std::vector<double> out(rlcm::pow2(th.items()), 0.0);
    for (Code r = 0; r < out.size(); ++r)
        for (Code a = 0; a < p.size(); ++a) out[r] += p[a] * oracle_point(th, a, r);
    return out;
}

// Entry (r, rp) of D(shift) from its closed form.
inline double oracle_d_entry(const std::vector<double>& shift, Code r, Code rp) {
    if ((r & rp) != rp) return 0.0;
    double v = 1.0;
    for (std::size_t j = 0; j < shift.size(); ++j)
        if (((r >> j) & 1) && !((rp >> j) & 1)) v *= -shift[j];
    return v;
}

inline double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testsupport
