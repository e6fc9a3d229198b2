#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlcm {

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizeLimitError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct InvalidParameterError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotApplicableError : Error { using Error::Error; };
struct InfeasibleConstructionError : Error { using Error::Error; };
struct DegeneratePairError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };

inline constexpr int kMaxItems = 20;
inline constexpr int kMaxAttributes = 20;
// 2^J * 2^K doubles must fit in 2^31 bytes.
inline constexpr int kMaxTableLog2Entries = 28;

// Bit code of a binary vector: bit i of the integer is coordinate i+1.
using Code = std::uint32_t;

inline constexpr std::size_t pow2(int n) { return std::size_t{1} << n; }

inline int popcount(Code c) { return __builtin_popcount(c); }

// a dominates b coordinatewise.
inline constexpr bool dominates(Code a, Code b) { return (a & b) == b; }

void require_attribute_count(int K);
void require_item_count(int J);
void require_table_size(int J, int K);

// Fixed-length binary vector with an integer code. Tag separates attribute
// profiles from response patterns so they cannot be mixed up.
template <class Tag>
class BinaryVector {
public:
    BinaryVector(Code code, int length) : code_(code), length_(length) {
        if (length < 1 || length > 31)
            throw DimensionError("binary vector length must be in [1, 31]");
        if (code >= (Code{1} << length))
            throw DimensionError("binary vector code out of range for its length");
    }

    static BinaryVector from_bits(std::span<const int> bits) {
        Code c = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != 0 && bits[i] != 1)
                throw DomainError("binary vector entries must be 0 or 1");
            if (bits[i]) c |= Code{1} << i;
        }
        return BinaryVector(c, static_cast<int>(bits.size()));
    }

    Code code() const { return code_; }
    int size() const { return length_; }
    int operator[](int i) const { return (code_ >> i) & 1; }
    int weight() const { return popcount(code_); }

    std::vector<int> bits() const {
        std::vector<int> out(length_);
        for (int i = 0; i < length_; ++i) out[i] = (*this)[i];
        return out;
    }

    friend bool operator==(const BinaryVector&, const BinaryVector&) = default;

private:
    Code code_;
    int length_;
};

struct AttributeTag {};
struct ItemTag {};
using AttributeProfile = BinaryVector<AttributeTag>;
using ResponsePattern = BinaryVector<ItemTag>;

// All 2^K profiles in increasing code order.
std::vector<AttributeProfile> enumerate_profiles(int K);

// Coordinatewise a >= b. Throws DimensionError on length mismatch.
template <class Tag>
bool profile_geq(const BinaryVector<Tag>& a, const BinaryVector<Tag>& b) {
    if (a.size() != b.size()) throw DimensionError("profile lengths differ");
    return dominates(a.code(), b.code());
}

// Weight-graded display order: 0, e_1, ..., e_n, e_1+e_2, e_1+e_3, ..., 1.
// Within a weight class, index sets are in lexicographic order.
std::vector<Code> graded_order(int n);

class QMatrix {
public:
    // rows[j][k] in {0,1}; no row may be all zero.
    explicit QMatrix(const std::vector<std::vector<int>>& rows);

    int items() const { return J_; }
    int attributes() const { return K_; }
    int at(int j, int k) const { return (rows_[j] >> k) & 1; }
    // Row j as an attribute code.
    Code row(int j) const { return rows_[j]; }
    std::span<const Code> rows() const { return rows_; }
    std::vector<std::vector<int>> to_table() const;

    static QMatrix identity(int K);
    // Vertical concatenation.
    static QMatrix stack(std::initializer_list<QMatrix> blocks);

    friend bool operator==(const QMatrix&, const QMatrix&) = default;

private:
    QMatrix() = default;
    int J_ = 0;
    int K_ = 0;
    std::vector<Code> rows_;
};

// J x 2^K table; column index is the attribute-profile code.
class ThetaMatrix {
public:
    ThetaMatrix(int J, int K, std::vector<double> values, bool probability = true);

    int items() const { return J_; }
    int attributes() const { return K_; }
    std::size_t profiles() const { return pow2(K_); }
    bool is_probability() const { return probability_; }

    double operator()(int j, Code alpha) const { return values_[j * profiles() + alpha]; }
    std::span<const double> row(int j) const {
        return {values_.data() + j * profiles(), profiles()};
    }
    std::span<const double> values() const { return values_; }
    // theta_{., alpha} for all items.
    std::vector<double> column(Code alpha) const;

private:
    int J_;
    int K_;
    bool probability_;
    std::vector<double> values_;
};

double max_abs_diff(const ThetaMatrix& a, const ThetaMatrix& b);

// Distribution over 2^K profiles, strictly inside the open simplex.
class ProportionVector {
public:
    static constexpr double kRenormalizeTolerance = 1e-9;

    explicit ProportionVector(std::vector<double> probs);
    static ProportionVector uniform(int K);

    int attributes() const { return K_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](Code alpha) const { return probs_[alpha]; }
    std::span<const double> values() const { return probs_; }

private:
    int K_;
    std::vector<double> probs_;
};

double max_abs_diff(const ProportionVector& a, const ProportionVector& b);

}  // namespace rlcm
