#pragma once

#include <span>
#include <vector>

#include "rlcm/core.hpp"

namespace rlcm {

/// Marginal table t_{r,alpha} = P(R >= r | alpha): 2^J rows by 2^K columns.
/// Row r is the elementwise product of the theta rows of the items in r.
class TMatrix {
public:
    TMatrix(int J, int K, std::vector<double> values);

    int items() const { return J_; }
    int attributes() const { return K_; }
    std::size_t rows() const { return pow2(J_); }
    std::size_t cols() const { return pow2(K_); }

    double operator()(Code r, Code alpha) const { return values_[r * cols() + alpha]; }
    std::span<const double> row(Code r) const { return {values_.data() + r * cols(), cols()}; }
    std::span<const double> values() const { return values_; }

private:
    int J_;
    int K_;
    std::vector<double> values_;
};

// Dense D(shift) is only materialised up to this many items.
inline constexpr int kMaxDenseTransformItems = 12;

/// 2^J x 2^J lower-triangular map with T(theta - shift 1^T) = D(shift) T(theta).
/// Entry (r, r') is prod_{j in r \ r'} (-shift_j) when r' <= r, else 0.
class TransformMatrix {
public:
    explicit TransformMatrix(std::vector<double> shift);

    int items() const { return static_cast<int>(shift_.size()); }
    std::size_t size() const { return pow2(items()); }
    std::span<const double> shift() const { return shift_; }
    double operator()(Code r, Code rp) const { return values_[r * size() + rp]; }
    std::span<const double> values() const { return values_; }

    TransformMatrix operator*(const TransformMatrix& other) const;
    TMatrix operator*(const TMatrix& t) const;

private:
    TransformMatrix(std::vector<double> shift, std::vector<double> values)
        : shift_(std::move(shift)), values_(std::move(values)) {}
    std::vector<double> shift_;
    std::vector<double> values_;
};

/// prod_j theta_j^r_j (1 - theta_j)^(1 - r_j) over the J items at one profile.
double joint_prob(std::span<const double> theta_col, const ResponsePattern& r);

TMatrix build_tmatrix(const ThetaMatrix& theta);

/// Entry r is P(R >= r) = sum_alpha t_{r,alpha} p_alpha.
std::vector<double> marginal_vector(const TMatrix& t, const ProportionVector& p);

/// P(R = r) for all 2^J patterns. Requires a probability table.
std::vector<double> response_distribution(const ThetaMatrix& theta, const ProportionVector& p);

/// Point probabilities from a vector of P(R >= r) by inclusion-exclusion.
std::vector<double> mobius_inversion(std::span<const double> marginals, int J);

TransformMatrix build_transform(std::span<const double> shift);

/// Row j minus shift_j; result is not a probability table.
ThetaMatrix apply_shift(const ThetaMatrix& theta, std::span<const double> shift);

/// D(shift) t without forming D. Works for any J under the table cap.
TMatrix apply_transform(std::span<const double> shift, const TMatrix& t);

double max_abs_diff(const TMatrix& a, const TMatrix& b);

}  // namespace rlcm
