// rlcm: command-line front end for the restricted latent class toolkit.
//
// Exit codes: 0 success (check: identifiable under the sufficient conditions),
// 1 input or usage error, 2 check: incomplete Q-matrix, 3 check: not covered
// by the sufficient conditions, 4 a numerical verification failed.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "rlcm/core.hpp"
#include "rlcm/identifiability.hpp"
#include "rlcm/inference.hpp"
#include "rlcm/io.hpp"
#include "rlcm/models.hpp"
#include "rlcm/tmatrix.hpp"

using namespace rlcm;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitNotCovered = 3;
constexpr int kExitVerifyFailed = 4;
constexpr std::uint64_t kDefaultSeed = 1234567;

json load_json(const std::string& path) { return io::parse_json(io::read_file(path)); }

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) std::cout << text;
    else io::write_file(out_path, text);
}

void emit_json(const json& j, const std::string& out_path) { emit(j.dump(2) + "\n", out_path); }

// A theta table or an item-parameter file; parameters need Q.
ThetaMatrix load_theta_like(const std::string& path, const std::optional<QMatrix>& Q) {
    json j = load_json(path);
    std::string format = j.value("format", j.contains("items") ? "rlcm.item_params" : "rlcm.theta");
    if (format == "rlcm.item_params") {
        if (!Q) throw io::ParseError(path + ": item parameters need a Q-matrix (--q)");
        return theta_from_params(*Q, io::item_params_from_json(j, Q->attributes()));
    }
    ThetaMatrix t = io::theta_from_json(j);
    if (Q && (t.items() != Q->items() || t.attributes() != Q->attributes()))
        throw DimensionError(path + ": theta is " + std::to_string(t.items()) + " x 2^" +
                             std::to_string(t.attributes()) + " but Q is " + std::to_string(Q->items()) + " x " +
                             std::to_string(Q->attributes()));
    return t;
}

QMatrix load_q(const std::string& path) { return io::parse_qmatrix_csv(io::read_file(path)); }

std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            long long v = std::stoll(tok);
            if (v < 1) throw std::invalid_argument("");
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw io::ParseError("--n-grid entry '" + tok + "' is not a positive integer");
        }
    }
    if (out.empty()) throw io::ParseError("--n-grid is empty");
    return out;
}

struct EmFlags {
    int max_iters = 2000;
    double tol = 1e-7;
    int restarts = 10;
    std::uint64_t seed = kDefaultSeed;
    std::string init_params;
    std::string init_p;

    void attach(CLI::App* app) {
        app->add_option("--max-iters", max_iters, "EM iteration cap")->capture_default_str();
        app->add_option("--tol", tol, "stop when the log-likelihood gain is below this")->capture_default_str();
        app->add_option("--restarts", restarts, "seeded EM initialisations")->capture_default_str();
        app->add_option("--seed", seed, "random seed")->capture_default_str();
        app->add_option("--init-params", init_params, "item parameters for the first restart")
            ->check(CLI::ExistingFile);
        app->add_option("--init-p", init_p, "proportions for the first restart")->check(CLI::ExistingFile);
    }

    EmConfig config(int K) const {
        EmConfig c;
        c.max_iters = max_iters;
        c.tol = tol;
        c.restarts = restarts;
        c.seed = seed;
        if (!init_params.empty()) c.initial_params = io::item_params_from_json(load_json(init_params), K);
        if (!init_p.empty()) c.initial_p = io::proportions_from_json(load_json(init_p));
        return c;
    }
};

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::IdentifiableByTheorem1: return kExitOk;
        case Verdict::NonIdentifiableIncomplete: return kExitIncomplete;
        case Verdict::NotCoveredBySufficientConditions: return kExitNotCovered;
    }
    return kExitInput;
}

double verify_transform_residual(int J, int K, std::uint64_t seed, bool& dense) {
    require_table_size(J, K);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0), shift_dist(-1.0, 1.0);
    std::vector<double> values(J * pow2(K));
    for (double& v : values) v = unit(rng);
    ThetaMatrix theta(J, K, std::move(values));
    std::vector<double> shift(J);
    for (double& s : shift) s = shift_dist(rng);
    TMatrix direct = build_tmatrix(apply_shift(theta, shift));
    TMatrix base = build_tmatrix(theta);
    dense = J <= kMaxDenseTransformItems;
    TMatrix via = dense ? build_transform(shift) * base : apply_transform(shift, base);
    return max_abs_diff(direct, via);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identifiability checks, T-matrix algebra and EM fitting for Q-restricted latent class models"};
    app.set_version_flag("--version", "rlcm 1.0");
    bool print_schema = false;
    app.add_flag("--schema", print_schema, "print the JSON schemas of every file format and exit");

    std::string q_path, theta_path, params_path, p_path, out_path, data_path, design_path, pair_path;
    std::string mode, families_text, n_grid_text, order = "binary";
    std::size_t n = 1000;
    int replications = 5;
    int tj = 6, tk = 2;
    std::uint64_t seed = kDefaultSeed;
    EmFlags fit_flags, exp_flags;

    auto* check = app.add_subcommand("check", "identifiability report for a Q-matrix (and optionally theta)");
    check->add_option("--q", q_path, "Q-matrix CSV")->required()->check(CLI::ExistingFile);
    check->add_option("--theta", theta_path, "theta JSON or item-parameter JSON")->check(CLI::ExistingFile);
    check->add_option("--params", params_path, "item-parameter JSON")->check(CLI::ExistingFile);
    check->add_option("--out", out_path, "write the report here instead of stdout");

    auto* counter = app.add_subcommand("counterexample", "construct two parameter sets with equal distributions");
    counter->add_option("--mode", mode, "incomplete | prop2")
        ->required()
        ->check(CLI::IsMember({"incomplete", "prop2"}));
    counter->add_option("--q", q_path, "Q-matrix CSV (incomplete mode)")->check(CLI::ExistingFile);
    counter->add_option("--theta", theta_path, "theta or item-parameter JSON (incomplete mode)")
        ->check(CLI::ExistingFile);
    counter->add_option("--params", params_path, "item-parameter JSON (incomplete mode)")->check(CLI::ExistingFile);
    counter->add_option("--p", p_path, "proportions JSON (incomplete mode; uniform if absent)")
        ->check(CLI::ExistingFile);
    counter->add_option("--design", design_path, "design JSON (prop2 mode)")->check(CLI::ExistingFile);
    counter->add_option("--out", out_path, "write the pair here instead of stdout");

    auto* verify = app.add_subcommand("verify", "re-check a stored pair by exhaustive enumeration");
    verify->add_option("--pair", pair_path, "pair JSON")->required()->check(CLI::ExistingFile);

    auto* sim = app.add_subcommand("simulate", "draw response data");
    sim->add_option("--q", q_path, "Q-matrix CSV")->check(CLI::ExistingFile);
    sim->add_option("--params", params_path, "item-parameter or theta JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--p", p_path, "proportions JSON (uniform if absent)")->check(CLI::ExistingFile);
    sim->add_option("--n", n, "number of subjects")->capture_default_str();
    sim->add_option("--seed", seed, "random seed")->capture_default_str();
    sim->add_option("--out", out_path, "responses CSV (stdout if absent)");

    auto* fit = app.add_subcommand("fit", "restricted EM fit");
    fit->add_option("--q", q_path, "Q-matrix CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--data", data_path, "responses CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--families", families_text, "comma-separated family per item, or one family for all");
    fit->add_option("--params", params_path, "take the families from this item-parameter JSON")
        ->check(CLI::ExistingFile);
    fit->add_option("--out", out_path, "fit JSON (stdout if absent)");
    fit_flags.attach(fit);

    auto* exp = app.add_subcommand("experiment", "simulate-and-fit error table over a grid of sample sizes");
    exp->add_option("--q", q_path, "Q-matrix CSV")->required()->check(CLI::ExistingFile);
    exp->add_option("--params", params_path, "true item parameters")->required()->check(CLI::ExistingFile);
    exp->add_option("--p", p_path, "true proportions (uniform if absent)")->check(CLI::ExistingFile);
    exp->add_option("--n-grid", n_grid_text, "comma-separated sample sizes")->required();
    exp->add_option("--replications", replications, "replications per sample size")->capture_default_str();
    exp->add_option("--out", out_path, "table JSON (stdout if absent)");
    exp_flags.attach(exp);

    auto* tmat = app.add_subcommand("tmatrix", "print the T-matrix and response distribution as CSV");
    tmat->add_option("--theta", theta_path, "theta or item-parameter JSON")->required()->check(CLI::ExistingFile);
    tmat->add_option("--q", q_path, "Q-matrix CSV (needed for item parameters)")->check(CLI::ExistingFile);
    tmat->add_option("--p", p_path, "proportions JSON; adds the distribution table")->check(CLI::ExistingFile);
    tmat->add_option("--order", order, "display order")->check(CLI::IsMember({"binary", "graded"}));
    tmat->add_option("--out", out_path, "CSV output (stdout if absent)");

    auto* vt = app.add_subcommand("verify-transform", "check T(theta - shift) = D(shift) T(theta) on a random draw");
    vt->add_option("--J", tj, "items")->capture_default_str();
    vt->add_option("--K", tk, "attributes")->capture_default_str();
    vt->add_option("--seed", seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (print_schema) {
            std::cout << io::schemas().dump(2) << "\n";
            return kExitOk;
        }

        if (*check) {
            QMatrix Q = load_q(q_path);
            std::optional<ThetaMatrix> theta;
            if (!theta_path.empty()) theta = load_theta_like(theta_path, Q);
            else if (!params_path.empty()) theta = load_theta_like(params_path, Q);
            IdentifiabilityReport rep = verdict(Q, theta);
            emit_json(io::report_to_json(rep), out_path);
            return verdict_exit(rep.verdict);
        }

        if (*counter) {
            std::optional<NonIdentifiablePair> pair;
            if (mode == "incomplete") {
                if (q_path.empty()) throw io::ParseError("incomplete mode needs --q");
                QMatrix Q = load_q(q_path);
                std::string tp = !theta_path.empty() ? theta_path : params_path;
                if (tp.empty()) throw io::ParseError("incomplete mode needs --theta or --params");
                ThetaMatrix theta = load_theta_like(tp, Q);
                ProportionVector p = p_path.empty() ? ProportionVector::uniform(Q.attributes())
                                                    : io::proportions_from_json(load_json(p_path));
                pair = incomplete_counterexample(Q, theta, p);
            } else {
                if (design_path.empty()) throw io::ParseError("prop2 mode needs --design");
                pair = prop2_counterexample(io::prop2_design_from_json(load_json(design_path)));
            }
            // independent re-check before anything is written
            double gap = distributions_equal(pair->first(), pair->second());
            if (!(gap <= kPairGapTolerance)) {
                std::cerr << "error: re-verification found distribution gap " << gap << "\n";
                return kExitVerifyFailed;
            }
            json j = io::pair_to_json(*pair);
            j["verified_gap"] = gap;
            emit_json(j, out_path);
            return kExitOk;
        }

        if (*verify) {
            auto [a, b] = io::pair_points_from_json(load_json(pair_path));
            double gap = distributions_equal(a, b);
            double dist = parameter_distance(a, b);
            bool ok = gap <= kPairGapTolerance && dist > kPairMinDistance;
            emit_json({{"max_distribution_gap", gap},
                       {"parameter_distance", dist},
                       {"gap_tolerance", kPairGapTolerance},
                       {"non_identifiable_pair", ok}},
                      "");
            return ok ? kExitOk : kExitVerifyFailed;
        }

        if (*sim) {
            std::optional<QMatrix> Q;
            if (!q_path.empty()) Q = load_q(q_path);
            ThetaMatrix theta = load_theta_like(params_path, Q);
            ProportionVector p = p_path.empty() ? ProportionVector::uniform(theta.attributes())
                                                : io::proportions_from_json(load_json(p_path));
            emit(io::format_responses_csv(simulate(theta, p, n, seed)), out_path);
            return kExitOk;
        }

        if (*fit) {
            QMatrix Q = load_q(q_path);
            ResponseData data = io::parse_responses_csv(io::read_file(data_path));
            std::vector<Family> families;
            if (!params_path.empty()) {
                for (const auto& p : io::item_params_from_json(load_json(params_path), Q.attributes()))
                    families.push_back(family_of(p));
            } else if (!families_text.empty()) {
                std::stringstream ss(families_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) families.push_back(parse_family(tok));
                if (families.size() == 1) families.assign(Q.items(), families.front());
            } else {
                families.assign(Q.items(), Family::DINA);
            }
            FitResult result = em_fit(data, Q, families, fit_flags.config(Q.attributes()));
            emit_json(io::fit_to_json(result, Q.attributes()), out_path);
            return kExitOk;
        }

        if (*exp) {
            QMatrix Q = load_q(q_path);
            auto params = io::item_params_from_json(load_json(params_path), Q.attributes());
            ProportionVector p = p_path.empty() ? ProportionVector::uniform(Q.attributes())
                                                : io::proportions_from_json(load_json(p_path));
            ExperimentTable table = consistency_experiment(Q, params, p, parse_grid(n_grid_text), replications,
                                                           exp_flags.seed, exp_flags.config(Q.attributes()));
            for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
            emit_json(io::experiment_to_json(table), out_path);
            return kExitOk;
        }

        if (*tmat) {
            std::optional<QMatrix> Q;
            if (!q_path.empty()) Q = load_q(q_path);
            ThetaMatrix theta = load_theta_like(theta_path, Q);
            const bool graded = order == "graded";
            TMatrix t = build_tmatrix(theta);
            std::string text = io::format_tmatrix_csv(t, graded);
            if (!p_path.empty()) {
                ProportionVector p = io::proportions_from_json(load_json(p_path));
                text += io::format_distribution_csv(marginal_vector(t, p), response_distribution(theta, p),
                                                    theta.items(), graded);
            }
            emit(text, out_path);
            return kExitOk;
        }

        if (*vt) {
            bool dense = false;
            double residual = verify_transform_residual(tj, tk, seed, dense);
            constexpr double tol = 1e-12;
            emit_json({{"J", tj},
                       {"K", tk},
                       {"seed", seed},
                       {"dense_transform", dense},
                       {"residual", residual},
                       {"tolerance", tol}},
                      "");
            return residual <= tol ? kExitOk : kExitVerifyFailed;
        }

        std::cerr << app.help();
        return kExitInput;
    } catch (const NotApplicableError& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
