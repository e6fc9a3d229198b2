#include "rlcm/tmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "rlcm/kernels.hpp"

namespace rlcm {

TMatrix::TMatrix(int J, int K, std::vector<double> values) : J_(J), K_(K), values_(std::move(values)) {
    require_table_size(J, K);
    if (values_.size() != pow2(J) * pow2(K)) throw DimensionError("T-matrix storage has the wrong size");
}

TransformMatrix::TransformMatrix(std::vector<double> shift) : shift_(std::move(shift)) {
    const int J = items();
    require_item_count(J);
    if (J > kMaxDenseTransformItems)
        throw SizeLimitError("dense transform limited to J <= " + std::to_string(kMaxDenseTransformItems) +
                             "; use apply_transform for J=" + std::to_string(J));
    const Code R = static_cast<Code>(pow2(J));
    values_.assign(std::size_t{R} * R, 0.0);
    for (Code r = 0; r < R; ++r) {
        for (Code sub = r;; sub = (sub - 1) & r) {
            double d = 1.0;
            Code rest = r & ~sub;
            for (int j = 0; j < J; ++j)
                if (rest >> j & 1) d *= -shift_[j];
            values_[std::size_t{r} * R + sub] = d;
            if (sub == 0) break;
        }
    }
}

TransformMatrix TransformMatrix::operator*(const TransformMatrix& o) const {
    if (o.items() != items()) throw DimensionError("transform sizes differ");
    const std::size_t n = size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) {
            double a = values_[i * n + k];
            if (a == 0.0) continue;
            for (std::size_t j = 0; j <= k; ++j) out[i * n + j] += a * o.values_[k * n + j];
        }
    std::vector<double> s(shift_.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = shift_[j] + o.shift_[j];
    return TransformMatrix(std::move(s), std::move(out));
}

TMatrix TransformMatrix::operator*(const TMatrix& t) const {
    if (t.items() != items()) throw DimensionError("transform and T-matrix item counts differ");
    const std::size_t n = size(), C = t.cols();
    std::vector<double> out(n * C, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) {
            double a = values_[i * n + k];
            if (a == 0.0) continue;
            for (std::size_t c = 0; c < C; ++c) out[i * C + c] += a * t.values()[k * C + c];
        }
    return TMatrix(t.items(), t.attributes(), std::move(out));
}

double joint_prob(std::span<const double> theta_col, const ResponsePattern& r) {
    if (static_cast<int>(theta_col.size()) != r.size())
        throw DimensionError("theta column length differs from pattern length");
    double out = 1.0;
    for (int j = 0; j < r.size(); ++j) out *= r[j] ? theta_col[j] : 1.0 - theta_col[j];
    return out;
}

TMatrix build_tmatrix(const ThetaMatrix& theta) {
    const int J = theta.items(), K = theta.attributes();
    require_table_size(J, K);
    std::vector<double> out(pow2(J) * pow2(K));
    kernels::parallel::tmatrix_rows(theta.values(), J, pow2(K), out);
    return TMatrix(J, K, std::move(out));
}

std::vector<double> marginal_vector(const TMatrix& t, const ProportionVector& p) {
    if (t.cols() != p.size()) throw DimensionError("T-matrix columns do not match proportion vector");
    std::vector<double> out(t.rows());
    for (Code r = 0; r < t.rows(); ++r) {
        auto row = t.row(r);
        double s = 0.0;
        for (std::size_t a = 0; a < row.size(); ++a) s += row[a] * p[a];
        out[r] = s;
    }
    // t_{0,.} = 1 and sum p = 1; drop the rounding.
    auto first = t.row(0);
    if (std::all_of(first.begin(), first.end(), [](double v) { return v == 1.0; })) out[0] = 1.0;
    return out;
}

std::vector<double> response_distribution(const ThetaMatrix& theta, const ProportionVector& p) {
    if (!theta.is_probability()) throw DomainError("response distribution needs a probability theta table");
    if (theta.profiles() != p.size()) throw DimensionError("theta columns do not match proportion vector");
    require_table_size(theta.items(), theta.attributes());
    std::vector<double> out(pow2(theta.items()));
    kernels::parallel::response_distribution(theta.values(), theta.items(), theta.profiles(), p.values(), out);
    return out;
}

std::vector<double> mobius_inversion(std::span<const double> marginals, int J) {
    require_item_count(J);
    if (marginals.size() != pow2(J)) throw DimensionError("marginal vector length is not 2^J");
    std::vector<double> out(marginals.begin(), marginals.end());
    kernels::parallel::superset_mobius(out, J);
    return out;
}

TransformMatrix build_transform(std::span<const double> shift) {
    return TransformMatrix(std::vector<double>(shift.begin(), shift.end()));
}

ThetaMatrix apply_shift(const ThetaMatrix& theta, std::span<const double> shift) {
    if (static_cast<int>(shift.size()) != theta.items()) throw DimensionError("shift length differs from J");
    std::vector<double> v(theta.values().begin(), theta.values().end());
    const std::size_t C = theta.profiles();
    for (int j = 0; j < theta.items(); ++j)
        for (std::size_t a = 0; a < C; ++a) v[j * C + a] -= shift[j];
    return ThetaMatrix(theta.items(), theta.attributes(), std::move(v), false);
}

TMatrix apply_transform(std::span<const double> shift, const TMatrix& t) {
    if (static_cast<int>(shift.size()) != t.items()) throw DimensionError("shift length differs from J");
    std::vector<double> v(t.values().begin(), t.values().end());
    kernels::parallel::shift_transform(v, t.items(), t.cols(), shift);
    return TMatrix(t.items(), t.attributes(), std::move(v));
}

double max_abs_diff(const TMatrix& a, const TMatrix& b) {
    if (a.items() != b.items() || a.attributes() != b.attributes())
        throw DimensionError("T-matrices have different shapes");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

}  // namespace rlcm
