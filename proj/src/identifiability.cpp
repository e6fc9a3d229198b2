#include "rlcm/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rlcm/tmatrix.hpp"

namespace rlcm {

CompletenessResult is_complete(const QMatrix& Q) {
    CompletenessResult out;
    const int K = Q.attributes();
    out.witness.assign(K, std::nullopt);
    for (int j = 0; j < Q.items(); ++j) {
        Code q = Q.row(j);
        if (popcount(q) != 1) continue;
        int k = __builtin_ctz(q);
        if (!out.witness[k]) out.witness[k] = j;
    }
    out.complete = std::all_of(out.witness.begin(), out.witness.end(), [](const auto& w) { return w.has_value(); });
    return out;
}

C1Result check_c1(const QMatrix& Q) {
    C1Result out;
    const int K = Q.attributes();
    out.singleton_rows.assign(K, {});
    for (int j = 0; j < Q.items(); ++j)
        if (popcount(Q.row(j)) == 1) out.singleton_rows[__builtin_ctz(Q.row(j))].push_back(j);
    out.holds = std::all_of(out.singleton_rows.begin(), out.singleton_rows.end(),
                            [](const auto& rows) { return rows.size() >= 2; });
    if (out.holds) {
        IdentityBlocks b;
        for (int k = 0; k < K; ++k) {
            b.block_a.push_back(out.singleton_rows[k][0]);
            b.block_b.push_back(out.singleton_rows[k][1]);
        }
        out.blocks = std::move(b);
    }
    return out;
}

C2Result check_c2(const QMatrix& Q, const ThetaMatrix& theta, const IdentityBlocks& blocks) {
    const int K = Q.attributes();
    if (theta.items() != Q.items() || theta.attributes() != K)
        throw DimensionError("theta shape does not match Q");
    if (static_cast<int>(blocks.block_a.size()) != K || static_cast<int>(blocks.block_b.size()) != K)
        throw InvalidParameterError("identity blocks must designate one row per attribute");
    std::set<int> used;
    for (const auto* block : {&blocks.block_a, &blocks.block_b}) {
        for (int k = 0; k < K; ++k) {
            int j = (*block)[k];
            if (j < 0 || j >= Q.items()) throw InvalidParameterError("identity block row out of range");
            if (Q.row(j) != (Code{1} << k))
                throw InvalidParameterError("row " + std::to_string(j + 1) + " is not e_" + std::to_string(k + 1));
            if (!used.insert(j).second)
                throw InvalidParameterError("identity blocks share row " + std::to_string(j + 1));
        }
    }
    C2Result out;
    out.witness.assign(K, std::nullopt);
    for (int k = 0; k < K; ++k) {
        const Code ek = Code{1} << k;
        for (int j = 0; j < Q.items(); ++j) {
            if (used.count(j)) continue;
            if (std::abs(theta(j, ek) - theta(j, 0)) > kSeparationTolerance) {
                out.witness[k] = j;
                break;
            }
        }
    }
    out.holds = std::all_of(out.witness.begin(), out.witness.end(), [](const auto& w) { return w.has_value(); });
    return out;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::IdentifiableByTheorem1: return "IdentifiableByTheorem1";
        case Verdict::NotCoveredBySufficientConditions: return "NotCoveredBySufficientConditions";
        case Verdict::NonIdentifiableIncomplete: return "NonIdentifiableIncomplete";
    }
    return "?";
}

std::string designation_search_name(DesignationSearch d) {
    switch (d) {
        case DesignationSearch::First: return "first";
        case DesignationSearch::Exhaustive: return "exhaustive";
        case DesignationSearch::FirstOnlyLimitExceeded: return "first_only_limit_exceeded";
    }
    return "?";
}

namespace {

// Number of ways to pick two rows per attribute, saturating above the search limit.
std::size_t count_designations(const std::vector<std::vector<int>>& singleton_rows) {
    std::size_t total = 1;
    for (const auto& rows : singleton_rows) {
        std::size_t n = rows.size();
        total *= n * (n - 1) / 2;
        if (total > kMaxDesignations) return kMaxDesignations + 1;
    }
    return total;
}

// Calls visit(blocks) for every designation until it returns true.
template <class Visit>
bool for_each_designation(const std::vector<std::vector<int>>& singleton_rows, Visit&& visit) {
    const int K = static_cast<int>(singleton_rows.size());
    std::vector<std::pair<std::size_t, std::size_t>> pick(K, {0, 1});
    while (true) {
        IdentityBlocks b;
        for (int k = 0; k < K; ++k) {
            b.block_a.push_back(singleton_rows[k][pick[k].first]);
            b.block_b.push_back(singleton_rows[k][pick[k].second]);
        }
        if (visit(b)) return true;
        int k = 0;
        for (; k < K; ++k) {
            auto& [x, y] = pick[k];
            const std::size_t n = singleton_rows[k].size();
            if (++y < n) break;
            if (++x + 1 < n) { y = x + 1; break; }
            pick[k] = {0, 1};
        }
        if (k == K) return false;
    }
}

}  // namespace

IdentifiabilityReport verdict(const QMatrix& Q, const std::optional<ThetaMatrix>& theta) {
    IdentifiabilityReport rep;
    rep.completeness = is_complete(Q);
    rep.c1 = check_c1(Q);
    rep.three_identity_sufficient =
        std::all_of(rep.c1.singleton_rows.begin(), rep.c1.singleton_rows.end(),
                    [](const auto& rows) { return rows.size() >= 3; });

    if (theta && rep.c1.holds) {
        rep.designations_available = count_designations(rep.c1.singleton_rows);
        rep.c2 = check_c2(Q, *theta, *rep.c1.blocks);
        rep.c2_blocks = rep.c1.blocks;
        if (!rep.c2->holds && rep.designations_available > 1) {
            if (rep.designations_available <= kMaxDesignations) {
                rep.designation_search = DesignationSearch::Exhaustive;
                for_each_designation(rep.c1.singleton_rows, [&](const IdentityBlocks& b) {
                    C2Result r = check_c2(Q, *theta, b);
                    if (!r.holds) return false;
                    rep.c2 = std::move(r);
                    rep.c2_blocks = b;
                    return true;
                });
            } else {
                rep.designation_search = DesignationSearch::FirstOnlyLimitExceeded;
                rep.notes.push_back("more than " + std::to_string(kMaxDesignations) +
                                    " identity-block designations; C2 reported for the first designation only");
            }
        }
    }

    if (!rep.completeness.complete) {
        rep.verdict = Verdict::NonIdentifiableIncomplete;
    } else if (rep.c1.holds && rep.c2 && rep.c2->holds) {
        rep.verdict = Verdict::IdentifiableByTheorem1;
    } else if (!theta && rep.three_identity_sufficient) {
        rep.verdict = Verdict::IdentifiableByTheorem1;
        rep.notes.push_back("three identity blocks: C1 and C2 hold for any theta meeting the monotonicity assumptions");
    } else {
        rep.verdict = Verdict::NotCoveredBySufficientConditions;
    }
    return rep;
}

double distributions_equal(const ModelPoint& a, const ModelPoint& b) {
    if (a.theta.items() != b.theta.items() || a.theta.attributes() != b.theta.attributes())
        throw DimensionError("model points have different shapes");
    auto pa = response_distribution(a.theta, a.p);
    auto pb = response_distribution(b.theta, b.p);
    double gap = 0.0;
    for (std::size_t r = 0; r < pa.size(); ++r) gap = std::max(gap, std::abs(pa[r] - pb[r]));
    return gap;
}

double parameter_distance(const ModelPoint& a, const ModelPoint& b) {
    return std::max(max_abs_diff(a.theta, b.theta), max_abs_diff(a.p, b.p));
}

NonIdentifiablePair::NonIdentifiablePair(ModelPoint first, ModelPoint second)
    : first_(std::move(first)), second_(std::move(second)) {
    gap_ = distributions_equal(first_, second_);
    distance_ = rlcm::parameter_distance(first_, second_);
    if (!(gap_ <= kPairGapTolerance)) {
        std::ostringstream os;
        os << "constructed pair has distribution gap " << gap_ << " > " << kPairGapTolerance;
        throw ConsistencyError(os.str());
    }
    if (!(distance_ > kPairMinDistance)) {
        std::ostringstream os;
        os << "constructed pair is degenerate: parameter distance " << distance_ << " <= " << kPairMinDistance;
        throw DegeneratePairError(os.str());
    }
}

NonIdentifiablePair incomplete_counterexample(const QMatrix& Q, const ThetaMatrix& theta,
                                              const ProportionVector& p, std::optional<double> mass) {
    if (theta.items() != Q.items() || theta.attributes() != Q.attributes() || p.size() != theta.profiles())
        throw DimensionError("Q, theta and p shapes disagree");
    if (is_complete(Q).complete)
        throw NotApplicableError("Q-matrix is complete; the merged-class construction needs an incomplete Q");

    const Code C = static_cast<Code>(theta.profiles());
    for (Code a = 0; a < C; ++a) {
        for (Code b = a + 1; b < C; ++b) {
            bool same = true;
            for (int j = 0; j < theta.items() && same; ++j) same = theta(j, a) == theta(j, b);
            if (!same) continue;
            double eps = mass.value_or(std::min(p[a], p[b]) / 2.0);
            std::vector<double> moved(p.values().begin(), p.values().end());
            moved[a] -= eps;
            moved[b] += eps;
            return NonIdentifiablePair({theta, p}, {theta, ProportionVector(std::move(moved))});
        }
    }
    throw NotApplicableError("no two profiles share a theta column");
}

QMatrix prop2_qmatrix(int K, const std::vector<std::vector<int>>& extra_rows) {
    require_attribute_count(K);
    std::vector<std::vector<int>> rows;
    std::vector<int> e1(K, 0);
    e1[0] = 1;
    rows.push_back(e1);
    rows.push_back(e1);
    for (int rep = 0; rep < 2; ++rep)
        for (int k = 1; k < K; ++k) {
            std::vector<int> r(K, 0);
            r[k] = 1;
            rows.push_back(r);
        }
    for (const auto& extra : extra_rows) {
        if (static_cast<int>(extra.size()) != K - 1)
            throw DimensionError("free-block rows must have K-1 = " + std::to_string(K - 1) + " entries");
        std::vector<int> r{0};
        r.insert(r.end(), extra.begin(), extra.end());
        rows.push_back(r);
    }
    return QMatrix(rows);
}

namespace {

struct Prop2Solution {
    QMatrix Q;
    std::vector<Dina> alt_items;
    std::vector<double> p_true;
    std::vector<double> p_alt;
};

void require_open_unit(double v, const std::string& what) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << "construction infeasible: " << what << " = " << v << " is outside (0,1)";
        throw InfeasibleConstructionError(os.str());
    }
}

Prop2Solution solve_prop2(const Prop2Design& d) {
    QMatrix Q = prop2_qmatrix(d.K, d.extra_rows);
    const int J = Q.items();
    if (static_cast<int>(d.items.size()) != J)
        throw DimensionError("design has " + std::to_string(d.items.size()) + " item parameter sets for J=" +
                             std::to_string(J));
    if (!(d.rho > 0.0) || !std::isfinite(d.rho)) throw InvalidParameterError("rho must be a positive real");
    std::vector<ItemParams> as_params(d.items.begin(), d.items.end());
    validate_params(Q, as_params);

    const std::size_t half = pow2(d.K - 1);
    std::vector<double> w = d.base_weights;
    if (w.empty()) w.assign(half, 1.0 / static_cast<double>(half));
    if (w.size() != half) throw DimensionError("base weights must have 2^(K-1) entries");

    const double rho = d.rho;
    const double a = (1.0 - d.items[0].s) - d.anchor1;  // t_{e1,1} - tbar_{e1,0}
    const double b = d.items[0].g - d.anchor1;          // t_{e1,0} - tbar_{e1,0}
    const double c = (1.0 - d.items[1].s) - d.anchor2;
    const double e = d.items[1].g - d.anchor2;
    const double den1 = c + rho * e;
    const double den2 = a + rho * b;
    const double num = a * c + rho * b * e;
    constexpr double tiny = 1e-12;
    if (std::abs(den1) < tiny)
        throw InfeasibleConstructionError("construction infeasible: (t_{e2,1} - tbar_{e2,0}) + rho (t_{e2,0} - tbar_{e2,0}) vanishes");
    if (std::abs(den2) < tiny)
        throw InfeasibleConstructionError("construction infeasible: (t_{e1,1} - tbar_{e1,0}) + rho (t_{e1,0} - tbar_{e1,0}) vanishes");
    if (std::abs(num) < tiny)
        throw InfeasibleConstructionError("construction infeasible: mass-ratio denominator vanishes");

    require_open_unit(d.anchor1, "tbar_{e1,0}");
    require_open_unit(d.anchor2, "tbar_{e2,0}");
    const double t1 = d.anchor1 + num / den1;
    const double t2 = d.anchor2 + num / den2;
    require_open_unit(t1, "tbar_{e1,1}");
    require_open_unit(t2, "tbar_{e2,1}");
    const double ratio = den1 * den2 / num;

    Prop2Solution sol{std::move(Q), d.items, std::vector<double>(pow2(d.K)), std::vector<double>(pow2(d.K))};
    sol.alt_items[0] = Dina{1.0 - t1, d.anchor1};
    sol.alt_items[1] = Dina{1.0 - t2, d.anchor2};
    for (Code rest = 0; rest < half; ++rest) {
        const Code alpha = rest << 1;  // attribute 1 absent
        const Code alpha1 = alpha | 1;
        const double p0 = w[rest] * rho / (1.0 + rho);
        const double p1 = w[rest] / (1.0 + rho);
        sol.p_true[alpha] = p0;
        sol.p_true[alpha1] = p1;
        sol.p_alt[alpha1] = ratio * p1;
        sol.p_alt[alpha] = p0 + p1 - sol.p_alt[alpha1];
        require_open_unit(sol.p_alt[alpha1], "pbar at code " + std::to_string(alpha1));
        require_open_unit(sol.p_alt[alpha], "pbar at code " + std::to_string(alpha));
    }
    return sol;
}

}  // namespace

std::vector<Dina> prop2_alternative_items(const Prop2Design& design) { return solve_prop2(design).alt_items; }

NonIdentifiablePair prop2_counterexample(const Prop2Design& design) {
    Prop2Solution sol = solve_prop2(design);
    std::vector<ItemParams> truth(design.items.begin(), design.items.end());
    std::vector<ItemParams> alt(sol.alt_items.begin(), sol.alt_items.end());
    ModelPoint first{theta_from_params(sol.Q, truth), ProportionVector(sol.p_true)};
    ModelPoint second{theta_from_params(sol.Q, alt), ProportionVector(sol.p_alt)};
    return NonIdentifiablePair(std::move(first), std::move(second));
}

}  // namespace rlcm
