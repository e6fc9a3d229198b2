#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlcm/core.hpp"

namespace rlcm {

/// Conjunctive model: theta = 1-s if the item's attributes are all mastered, else g.
struct Dina {
    double s;
    double g;
};

/// Disjunctive model: theta = 1-s if any required attribute is mastered, else g.
struct Dino {
    double s;
    double g;
};

/// Identity-link saturated model. Keys are attribute codes that must be subsets
/// of the item's required set; key 0 is the intercept. Missing keys are zero.
/// theta_alpha = sum of beta[S] over S subset of (alpha AND q).
struct Gdina {
    std::map<Code, double> beta;
};

/// Logit-link additive model. beta has K entries; beta[k] is ignored when q_k = 0.
struct Llm {
    double beta0;
    std::vector<double> beta;
};

/// Reduced RUM. theta = pi * prod over required, unmastered k of r[k].
struct Rrum {
    double pi;
    std::vector<double> r;
};

using ItemParams = std::variant<Dina, Dino, Gdina, Llm, Rrum>;

enum class Family { DINA, DINO, GDINA, LLM, RRUM };

Family family_of(const ItemParams& p);
std::string family_name(Family f);
Family parse_family(const std::string& name);

int ideal_response_dina(const AttributeProfile& q_row, const AttributeProfile& alpha);
int ideal_response_dino(const AttributeProfile& q_row, const AttributeProfile& alpha);

/// Family-specific parameter constraints (s,g in (0,1) with 1-s > g; RRUM in
/// (0,1); G-DINA subset keys within q and partial sums in [0,1]). Throws
/// InvalidParameterError naming the item. theta_from_params does not call this.
void validate_params(const QMatrix& Q, const std::vector<ItemParams>& params);

/// theta_{j,alpha} for one item.
double item_theta(Code q_row, int K, const ItemParams& params, Code alpha);

/// Full J x 2^K table. Mixed families allowed. Throws InvalidParameterError
/// naming item and profile when an entry leaves [0,1].
ThetaMatrix theta_from_params(const QMatrix& Q, const std::vector<ItemParams>& params);

/// G-DINA coefficients reproducing a DINA item: beta[0] = g, beta[q] = 1-s-g.
Gdina gdina_from_dina(Code q_row, const Dina& d);

enum class Assumption { CapableConstant, CapableDominates, BaselineLowest, SingleAttributeGap };

struct MonotonicityViolation {
    int item;                     // 0-based
    Assumption kind;
    std::optional<Code> profile;  // offending profile, when one exists
    double margin;                // amount by which the condition fails
    std::string message;
};

inline constexpr double kMonotoneTolerance = 1e-10;

/// Empty result iff theta satisfies both monotonicity assumptions for Q.
std::vector<MonotonicityViolation> check_monotonicity(const QMatrix& Q, const ThetaMatrix& theta);

std::string assumption_name(Assumption a);

}  // namespace rlcm
