#include "rlcm/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rlcm {

namespace {

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string item_label(int j) { return "item " + std::to_string(j + 1); }

void require_length(const std::vector<double>& v, int K, int j, const char* what) {
    if (static_cast<int>(v.size()) != K)
        throw InvalidParameterError(item_label(j) + ": " + what + " has " +
                                    std::to_string(v.size()) + " entries, expected K=" +
                                    std::to_string(K));
}

}  // namespace

Family family_of(const ItemParams& p) { return static_cast<Family>(p.index()); }

std::string family_name(Family f) {
    switch (f) {
        case Family::DINA: return "DINA";
        case Family::DINO: return "DINO";
        case Family::GDINA: return "GDINA";
        case Family::LLM: return "LLM";
        case Family::RRUM: return "RRUM";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "G-DINA") up = "GDINA";
    if (up == "DINA") return Family::DINA;
    if (up == "DINO") return Family::DINO;
    if (up == "GDINA") return Family::GDINA;
    if (up == "LLM" || up == "C-RUM" || up == "CRUM") return Family::LLM;
    if (up == "RRUM") return Family::RRUM;
    throw InvalidParameterError("unknown model family '" + name + "'");
}

int ideal_response_dina(const AttributeProfile& q_row, const AttributeProfile& alpha) {
    return profile_geq(alpha, q_row) ? 1 : 0;
}

int ideal_response_dino(const AttributeProfile& q_row, const AttributeProfile& alpha) {
    if (q_row.size() != alpha.size()) throw DimensionError("profile lengths differ");
    return (q_row.code() & alpha.code()) != 0 ? 1 : 0;
}

double item_theta(Code q, int K, const ItemParams& params, Code alpha) {
    return std::visit(
        overloaded{
            [&](const Dina& d) { return dominates(alpha, q) ? 1.0 - d.s : d.g; },
            [&](const Dino& d) { return (alpha & q) != 0 ? 1.0 - d.s : d.g; },
            [&](const Gdina& d) {
                Code present = alpha & q;
                double sum = 0.0;
                for (const auto& [subset, b] : d.beta)
                    if (dominates(present, subset)) sum += b;
                return sum;
            },
            [&](const Llm& d) {
                double eta = d.beta0;
                for (int k = 0; k < K; ++k)
                    if ((q >> k & 1) && (alpha >> k & 1)) eta += d.beta[k];
                return 1.0 / (1.0 + std::exp(-eta));
            },
            [&](const Rrum& d) {
                double t = d.pi;
                for (int k = 0; k < K; ++k)
                    if ((q >> k & 1) && !(alpha >> k & 1)) t *= d.r[k];
                return t;
            },
        },
        params);
}

namespace {

void check_shape(const QMatrix& Q, const std::vector<ItemParams>& params) {
    if (static_cast<int>(params.size()) != Q.items())
        throw DimensionError("got " + std::to_string(params.size()) + " item parameter sets for " +
                             std::to_string(Q.items()) + " items");
    const int K = Q.attributes();
    for (int j = 0; j < Q.items(); ++j) {
        if (const auto* l = std::get_if<Llm>(&params[j])) require_length(l->beta, K, j, "LLM beta");
        if (const auto* r = std::get_if<Rrum>(&params[j])) require_length(r->r, K, j, "RRUM r");
        if (const auto* g = std::get_if<Gdina>(&params[j]))
            for (const auto& [subset, b] : g->beta)
                if (!dominates(Q.row(j), subset))
                    throw InvalidParameterError(item_label(j) + ": G-DINA coefficient for attribute code " +
                                                std::to_string(subset) +
                                                " is not within the item's required attributes");
    }
}

template <class Fail>
void check_slip_guess(double s, double g, Fail&& fail) {
    if (!(s > 0 && s < 1 && g > 0 && g < 1)) fail("s and g must lie in (0,1)");
    if (!(1.0 - s > g)) fail("requires 1 - s > g");
}

}  // namespace

void validate_params(const QMatrix& Q, const std::vector<ItemParams>& params) {
    check_shape(Q, params);
    const int K = Q.attributes();
    for (int j = 0; j < Q.items(); ++j) {
        const auto& p = params[j];
        auto fail = [&](const std::string& why) { throw InvalidParameterError(item_label(j) + ": " + why); };
        std::visit(overloaded{
                       [&](const Dina& d) { check_slip_guess(d.s, d.g, fail); },
                       [&](const Dino& d) { check_slip_guess(d.s, d.g, fail); },
                       [&](const Gdina&) {
                           Code q = Q.row(j);
                           for (Code sub = q;; sub = (sub - 1) & q) {
                               double t = item_theta(q, K, p, sub);
                               if (t < 0.0 || t > 1.0)
                                   fail("G-DINA partial sum for attribute code " + std::to_string(sub) +
                                        " is outside [0,1]");
                               if (sub == 0) break;
                           }
                       },
                       [&](const Llm& d) {
                           if (!std::isfinite(d.beta0)) fail("LLM intercept not finite");
                           for (double b : d.beta)
                               if (!std::isfinite(b)) fail("LLM slope not finite");
                       },
                       [&](const Rrum& d) {
                           if (!(d.pi > 0 && d.pi <= 1)) fail("RRUM pi must lie in (0,1]");
                           for (int k = 0; k < K; ++k)
                               if ((Q.row(j) >> k & 1) && !(d.r[k] > 0 && d.r[k] < 1))
                                   fail("RRUM r for attribute " + std::to_string(k + 1) + " must lie in (0,1)");
                       },
                   },
                   p);
    }
}

ThetaMatrix theta_from_params(const QMatrix& Q, const std::vector<ItemParams>& params) {
    check_shape(Q, params);
    const int J = Q.items();
    const int K = Q.attributes();
    const std::size_t C = pow2(K);
    std::vector<double> values(J * C);
    for (int j = 0; j < J; ++j) {
        for (Code a = 0; a < C; ++a) {
            double t = item_theta(Q.row(j), K, params[j], a);
            if (!(t >= 0.0 && t <= 1.0)) {
                std::ostringstream os;
                os << item_label(j) << " (" << family_name(family_of(params[j]))
                   << "): theta at profile code " << a << " is " << t << ", outside [0,1]";
                throw InvalidParameterError(os.str());
            }
            values[j * C + a] = t;
        }
    }
    return ThetaMatrix(J, K, std::move(values), true);
}

Gdina gdina_from_dina(Code q_row, const Dina& d) {
    Gdina out;
    out.beta[0] = d.g;
    out.beta[q_row] = 1.0 - d.s - d.g;
    return out;
}

std::string assumption_name(Assumption a) {
    switch (a) {
        case Assumption::CapableConstant: return "monotonicity: capable classes share one value";
        case Assumption::CapableDominates: return "monotonicity: capable value is the maximum";
        case Assumption::BaselineLowest: return "monotonicity: zero profile is the minimum";
        case Assumption::SingleAttributeGap: return "strict gap: single-attribute item separates full mastery";
    }
    return "?";
}

std::vector<MonotonicityViolation> check_monotonicity(const QMatrix& Q, const ThetaMatrix& theta) {
    if (theta.items() != Q.items() || theta.attributes() != Q.attributes())
        throw DimensionError("theta shape does not match Q");
    const double tol = kMonotoneTolerance;
    const int K = Q.attributes();
    const Code C = static_cast<Code>(pow2(K));
    std::vector<MonotonicityViolation> out;
    auto add = [&](int j, Assumption kind, std::optional<Code> a, double margin) {
        std::ostringstream os;
        os << "item " << j + 1 << ": " << assumption_name(kind);
        if (a) os << " fails at profile code " << *a;
        os << " (by " << margin << ")";
        out.push_back({j, kind, a, margin, os.str()});
    };

    for (int j = 0; j < Q.items(); ++j) {
        const Code q = Q.row(j);
        double cap_max = -INFINITY, cap_min = INFINITY;
        Code argmin = 0;
        for (Code a = 0; a < C; ++a) {
            if (!dominates(a, q)) continue;
            double t = theta(j, a);
            cap_max = std::max(cap_max, t);
            if (t < cap_min) { cap_min = t; argmin = a; }
        }
        if (cap_max - cap_min > tol) add(j, Assumption::CapableConstant, argmin, cap_max - cap_min);

        const double base = theta(j, 0);
        for (Code a = 0; a < C; ++a) {
            double t = theta(j, a);
            if (t - cap_min > tol) add(j, Assumption::CapableDominates, a, t - cap_min);
            if (base - t > tol) add(j, Assumption::BaselineLowest, a, base - t);
        }

        if (popcount(q) == 1) {
            const double top = theta(j, C - 1);
            double worst = -INFINITY;
            Code arg = 0;
            for (Code a = 0; a < C; ++a)
                if ((a & q) == 0 && theta(j, a) > worst) { worst = theta(j, a); arg = a; }
            if (!(top - worst > tol)) add(j, Assumption::SingleAttributeGap, arg, worst - top);
        }
    }
    return out;
}

}  // namespace rlcm
