#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlcm/core.hpp"
#include "rlcm/models.hpp"

namespace rlcm {

struct CompletenessResult {
    bool complete = false;
    // witness[k]: smallest row equal to e_k, if any.
    std::vector<std::optional<int>> witness;
};

/// Every attribute has an item that requires exactly that attribute.
CompletenessResult is_complete(const QMatrix& Q);

/// Two disjoint sets of K rows, each forming an identity block.
/// block_a[k], block_b[k] are the rows designated for attribute k.
struct IdentityBlocks {
    std::vector<int> block_a;
    std::vector<int> block_b;
};

struct C1Result {
    bool holds = false;
    // singleton_rows[k]: every row equal to e_k, in row order.
    std::vector<std::vector<int>> singleton_rows;
    // First two occurrences per attribute, present when holds.
    std::optional<IdentityBlocks> blocks;
};

C1Result check_c1(const QMatrix& Q);

inline constexpr double kSeparationTolerance = 1e-10;

struct C2Result {
    bool holds = false;
    // witness[k]: an item outside both blocks with |theta(e_k) - theta(0)| above tolerance.
    std::vector<std::optional<int>> witness;
};

/// Throws InvalidParameterError when the blocks are not two disjoint identity designations.
C2Result check_c2(const QMatrix& Q, const ThetaMatrix& theta, const IdentityBlocks& blocks);

enum class Verdict { IdentifiableByTheorem1, NotCoveredBySufficientConditions, NonIdentifiableIncomplete };

std::string verdict_name(Verdict v);

enum class DesignationSearch { First, Exhaustive, FirstOnlyLimitExceeded };

std::string designation_search_name(DesignationSearch d);

inline constexpr std::size_t kMaxDesignations = 256;

struct IdentifiabilityReport {
    CompletenessResult completeness;
    C1Result c1;
    std::optional<C2Result> c2;
    // Blocks under which c2 was evaluated (first designation unless a search found a better one).
    std::optional<IdentityBlocks> c2_blocks;
    DesignationSearch designation_search = DesignationSearch::First;
    std::size_t designations_available = 0;
    bool three_identity_sufficient = false;
    Verdict verdict = Verdict::NotCoveredBySufficientConditions;
    std::vector<std::string> notes;

    bool complete() const { return completeness.complete; }
    bool c1_holds() const { return c1.holds; }
    std::optional<bool> c2_holds() const {
        return c2 ? std::optional<bool>(c2->holds) : std::nullopt;
    }
};

/// Sufficient-condition verdict. Without theta, C2 is not evaluated and three
/// singleton rows per attribute suffice.
IdentifiabilityReport verdict(const QMatrix& Q, const std::optional<ThetaMatrix>& theta = std::nullopt);

struct ModelPoint {
    ThetaMatrix theta;
    ProportionVector p;
};

/// Max over all 2^J patterns of |P_a(R = r) - P_b(R = r)|, by exhaustive enumeration.
double distributions_equal(const ModelPoint& a, const ModelPoint& b);

/// max(max |theta_a - theta_b|, max |p_a - p_b|).
double parameter_distance(const ModelPoint& a, const ModelPoint& b);

inline constexpr double kPairGapTolerance = 1e-10;
inline constexpr double kPairMinDistance = 1e-6;

/// Two distinct parameter points with the same response distribution.
/// Construction re-verifies both properties from scratch.
class NonIdentifiablePair {
public:
    /// Throws ConsistencyError if the gap exceeds kPairGapTolerance and
    /// DegeneratePairError if the points are closer than kPairMinDistance.
    NonIdentifiablePair(ModelPoint first, ModelPoint second);

    const ModelPoint& first() const { return first_; }
    const ModelPoint& second() const { return second_; }
    double max_distribution_gap() const { return gap_; }
    double parameter_distance() const { return distance_; }

private:
    ModelPoint first_;
    ModelPoint second_;
    double gap_;
    double distance_;
};

/// Keeps theta and moves `mass` (default half the smaller share) between two
/// profiles whose theta columns coincide. Q must be incomplete.
NonIdentifiablePair incomplete_counterexample(const QMatrix& Q, const ThetaMatrix& theta,
                                              const ProportionVector& p,
                                              std::optional<double> mass = std::nullopt);

/// Inputs for the two-item attribute-1 construction under DINA.
struct Prop2Design {
    int K = 2;
    // Rows of the free block, each of length K-1 (attribute 1 is never required there).
    std::vector<std::vector<int>> extra_rows;
    // Slip / guess for all J = 2K + extra_rows.size() items, in row order.
    std::vector<Dina> items;
    double rho = 1.0;
    // Alternative guessing values for items 1 and 2.
    double anchor1 = 0.0;
    double anchor2 = 0.0;
    // Distribution of (alpha_2..alpha_K) over 2^{K-1} codes; uniform when empty.
    std::vector<double> base_weights;
};

/// The Q-matrix rows (e_1, e_1, (0 I_{K-1}), (0 I_{K-1}), (0 Q*)).
QMatrix prop2_qmatrix(int K, const std::vector<std::vector<int>>& extra_rows);

/// Builds the true point with p_alpha / p_{alpha+e_1} = rho and the alternative
/// point solving the marginal equations. Throws InfeasibleConstructionError when
/// a denominator vanishes or a constructed quantity leaves (0,1).
NonIdentifiablePair prop2_counterexample(const Prop2Design& design);

/// Item parameters of the alternative member (DINA, items 1 and 2 changed).
std::vector<Dina> prop2_alternative_items(const Prop2Design& design);

}  // namespace rlcm
