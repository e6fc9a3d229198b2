#include <doctest.h>

#include "rlcm/kernels.hpp"
#include "support.hpp"

using namespace rlcm;
namespace ks = rlcm::kernels::serial;
namespace kp = rlcm::kernels::parallel;
using testsupport::max_abs;
using testsupport::unif;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = unif(rng, lo, hi);
    return v;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree") {
    std::mt19937_64 rng(2024);
    // sizes crossing the OpenMP thresholds
    for (auto [J, K] : {std::pair{1, 1}, {3, 2}, {7, 3}, {11, 2}, {13, 1}}) {
        const std::size_t C = pow2(K), R = pow2(J);
        auto theta = random_vec(J * C, rng);
        auto p = random_vec(C, rng, 0.1, 1.0);
        double s = 0;
        for (double x : p) s += x;
        for (double& x : p) x /= s;

        std::vector<double> a(R * C), b(R * C);
        ks::tmatrix_rows(theta, J, C, a);
        kp::tmatrix_rows(theta, J, C, b);
        CHECK(max_abs(a, b) <= 1e-13);

        std::vector<double> da(R), db(R);
        ks::response_distribution(theta, J, C, p, da);
        kp::response_distribution(theta, J, C, p, db);
        CHECK(max_abs(da, db) <= 1e-14);

        std::vector<Code> pats(300);
        for (auto& c : pats) c = static_cast<Code>(rng() % R);
        std::vector<double> la(pats.size() * C), lb(pats.size() * C);
        ks::pattern_likelihoods(pats, theta, J, C, 1e-12, la);
        kp::pattern_likelihoods(pats, theta, J, C, 1e-12, lb);
        CHECK(max_abs(la, lb) <= 1e-14);

        auto f = random_vec(R, rng);
        auto fa = f, fb = f;
        ks::superset_sums(fa, J);
        kp::superset_sums(fb, J);
        CHECK(max_abs(fa, fb) <= 1e-10);
        ks::superset_mobius(fa, J);
        kp::superset_mobius(fb, J);
        CHECK(max_abs(fa, f) <= 1e-9);
        CHECK(max_abs(fb, f) <= 1e-9);

        if (J <= 11) {
            auto shift = random_vec(J, rng, -1.0, 1.0);
            auto ta = a, tb = a;
            ks::shift_transform(ta, J, C, shift);
            kp::shift_transform(tb, J, C, shift);
            CHECK(max_abs(ta, tb) <= 1e-12);
        }
    }
}

TEST_CASE("pattern likelihood clamp keeps logs finite") {
    std::vector<double> theta{0.0, 1.0};
    std::vector<Code> pats{0, 1};
    std::vector<double> out(4);
    kp::pattern_likelihoods(pats, theta, 1, 2, 1e-12, out);
    for (double v : out) CHECK(v > 0.0);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(1e-12));
}

TEST_CASE("kernels produce identical output across thread counts") {
    std::mt19937_64 rng(5);
    const int J = 12;
    const std::size_t C = 4;
    auto theta = random_vec(J * C, rng);
    std::vector<double> a(pow2(J) * C), b(pow2(J) * C);
    kp::tmatrix_rows(theta, J, C, a);
    kp::tmatrix_rows(theta, J, C, b);
    CHECK(a == b);
    CHECK(kernels::max_threads() >= 1);
}
