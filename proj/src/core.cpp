#include "rlcm/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rlcm {

void require_attribute_count(int K) {
    if (K < 1 || K > kMaxAttributes)
        throw SizeLimitError("attribute count K=" + std::to_string(K) + " outside [1, " +
                             std::to_string(kMaxAttributes) + "]");
}

void require_item_count(int J) {
    if (J < 1 || J > kMaxItems)
        throw SizeLimitError("item count J=" + std::to_string(J) + " outside [1, " +
                             std::to_string(kMaxItems) + "]");
}

void require_table_size(int J, int K) {
    require_item_count(J);
    require_attribute_count(K);
    if (J + K > kMaxTableLog2Entries)
        throw SizeLimitError("2^J x 2^K table with J=" + std::to_string(J) + ", K=" +
                             std::to_string(K) + " exceeds the 2^31-byte cap");
}

std::vector<AttributeProfile> enumerate_profiles(int K) {
    require_attribute_count(K);
    std::vector<AttributeProfile> out;
    out.reserve(pow2(K));
    for (Code c = 0; c < pow2(K); ++c) out.emplace_back(c, K);
    return out;
}

std::vector<Code> graded_order(int n) {
    if (n < 1 || n > 31) throw DimensionError("graded_order length must be in [1, 31]");
    std::vector<Code> order(pow2(n));
    std::iota(order.begin(), order.end(), Code{0});
    // Lexicographic comparison of sorted index sets: the set whose smallest
    // differing index is present comes first.
    std::stable_sort(order.begin(), order.end(), [](Code a, Code b) {
        int wa = popcount(a), wb = popcount(b);
        if (wa != wb) return wa < wb;
        Code diff = a ^ b;
        if (diff == 0) return false;
        Code lowest = diff & (~diff + 1);
        return (a & lowest) != 0;
    });
    return order;
}

QMatrix::QMatrix(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw DimensionError("Q-matrix needs at least one row");
    J_ = static_cast<int>(rows.size());
    K_ = static_cast<int>(rows.front().size());
    require_item_count(J_);
    require_attribute_count(K_);
    rows_.reserve(J_);
    for (int j = 0; j < J_; ++j) {
        if (static_cast<int>(rows[j].size()) != K_)
            throw DimensionError("Q-matrix row " + std::to_string(j + 1) + " has " +
                                 std::to_string(rows[j].size()) + " entries, expected " +
                                 std::to_string(K_));
        Code c = 0;
        for (int k = 0; k < K_; ++k) {
            int v = rows[j][k];
            if (v != 0 && v != 1)
                throw DomainError("Q-matrix entry (" + std::to_string(j + 1) + "," +
                                  std::to_string(k + 1) + ") is not 0/1");
            if (v) c |= Code{1} << k;
        }
        if (c == 0) throw DomainError("Q-matrix row " + std::to_string(j + 1) + " is all zero");
        rows_.push_back(c);
    }
}

std::vector<std::vector<int>> QMatrix::to_table() const {
    std::vector<std::vector<int>> t(J_, std::vector<int>(K_));
    for (int j = 0; j < J_; ++j)
        for (int k = 0; k < K_; ++k) t[j][k] = at(j, k);
    return t;
}

QMatrix QMatrix::identity(int K) {
    require_attribute_count(K);
    std::vector<std::vector<int>> rows(K, std::vector<int>(K, 0));
    for (int k = 0; k < K; ++k) rows[k][k] = 1;
    return QMatrix(rows);
}

QMatrix QMatrix::stack(std::initializer_list<QMatrix> blocks) {
    if (blocks.size() == 0) throw DimensionError("stack of zero blocks");
    QMatrix out;
    out.K_ = blocks.begin()->K_;
    for (const auto& b : blocks) {
        if (b.K_ != out.K_) throw DimensionError("stacked Q blocks have different K");
        out.rows_.insert(out.rows_.end(), b.rows_.begin(), b.rows_.end());
    }
    out.J_ = static_cast<int>(out.rows_.size());
    require_item_count(out.J_);
    return out;
}

ThetaMatrix::ThetaMatrix(int J, int K, std::vector<double> values, bool probability)
    : J_(J), K_(K), probability_(probability), values_(std::move(values)) {
    require_item_count(J);
    require_attribute_count(K);
    if (values_.size() != static_cast<std::size_t>(J) * pow2(K))
        throw DimensionError("theta table has " + std::to_string(values_.size()) +
                             " entries, expected J*2^K = " +
                             std::to_string(static_cast<std::size_t>(J) * pow2(K)));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double v = values_[i];
        if (!std::isfinite(v)) throw DomainError("theta entry is not finite");
        if (probability_ && (v < 0.0 || v > 1.0)) {
            std::ostringstream os;
            os << "theta entry for item " << i / pow2(K) + 1 << ", profile code " << i % pow2(K)
               << " is " << v << ", outside [0,1]";
            throw DomainError(os.str());
        }
    }
}

std::vector<double> ThetaMatrix::column(Code alpha) const {
    std::vector<double> col(J_);
    for (int j = 0; j < J_; ++j) col[j] = (*this)(j, alpha);
    return col;
}

double max_abs_diff(const ThetaMatrix& a, const ThetaMatrix& b) {
    if (a.items() != b.items() || a.attributes() != b.attributes())
        throw DimensionError("theta tables have different shapes");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

ProportionVector::ProportionVector(std::vector<double> probs) : probs_(std::move(probs)) {
    std::size_t n = probs_.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw DimensionError("proportion vector length must be 2^K with K >= 1");
    K_ = __builtin_ctzll(n);
    require_attribute_count(K_);
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        double v = probs_[a];
        if (!(v > 0.0 && v < 1.0)) {
            std::ostringstream os;
            os << "proportion for profile code " << a << " is " << v << ", outside (0,1)";
            throw DomainError(os.str());
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "proportions sum to " << sum << ", not 1";
        throw DomainError(os.str());
    }
    for (double& v : probs_) v /= sum;
}

ProportionVector ProportionVector::uniform(int K) {
    require_attribute_count(K);
    return ProportionVector(std::vector<double>(pow2(K), 1.0 / static_cast<double>(pow2(K))));
}

double max_abs_diff(const ProportionVector& a, const ProportionVector& b) {
    if (a.size() != b.size()) throw DimensionError("proportion vectors have different lengths");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

}  // namespace rlcm
