#include "rlcm/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "rlcm/kernels.hpp"
#include "rlcm/tmatrix.hpp"

namespace rlcm {

ResponseData::ResponseData(int J, std::vector<Code> patterns) : J_(J), patterns_(std::move(patterns)) {
    require_item_count(J);
    if (patterns_.empty()) throw DimensionError("response data needs at least one subject");
    const Code limit = static_cast<Code>(pow2(J));
    for (std::size_t i = 0; i < patterns_.size(); ++i)
        if (patterns_[i] >= limit)
            throw DimensionError("subject " + std::to_string(i + 1) + " has a pattern wider than J");
}

ResponseData::Aggregated ResponseData::aggregate() const {
    std::map<Code, double> counts;
    for (Code r : patterns_) counts[r] += 1.0;
    Aggregated out;
    for (const auto& [r, n] : counts) {
        out.patterns.push_back(r);
        out.counts.push_back(n);
    }
    return out;
}

ResponseData simulate(const ThetaMatrix& theta, const ProportionVector& p, std::size_t N, std::uint64_t seed) {
    if (!theta.is_probability()) throw DomainError("simulation needs a probability theta table");
    if (theta.profiles() != p.size()) throw DimensionError("theta columns do not match proportion vector");
    if (N == 0) throw DimensionError("simulation needs N >= 1");
    std::mt19937_64 rng(seed);
    std::discrete_distribution<Code> pick_class(p.values().begin(), p.values().end());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Code> rows(N);
    for (auto& r : rows) {
        Code a = pick_class(rng);
        Code pattern = 0;
        for (int j = 0; j < theta.items(); ++j)
            if (unif(rng) < theta(j, a)) pattern |= Code{1} << j;
        r = pattern;
    }
    return ResponseData(theta.items(), std::move(rows));
}

std::vector<double> empirical_gamma(const ResponseData& data) {
    const int J = data.items();
    std::vector<double> f(pow2(J), 0.0);
    for (Code r : data.patterns()) f[r] += 1.0;
    kernels::parallel::superset_sums(f, J);
    const double n = static_cast<double>(data.subjects());
    for (double& v : f) v /= n;
    f[0] = 1.0;
    return f;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

// E-step over aggregated patterns. Fills posterior weights (U x C, multiplicity
// included) and returns the log-likelihood.
double e_step(const ResponseData::Aggregated& agg, int J, const ThetaMatrix& theta, std::span<const double> p,
              std::vector<double>& lik, std::vector<double>* posterior) {
    const std::size_t C = theta.profiles(), U = agg.patterns.size();
    lik.resize(U * C);
    kernels::parallel::pattern_likelihoods(agg.patterns, theta.values(), J, C, kThetaClamp, lik);
    if (posterior) posterior->resize(U * C);
    double ll = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
        const double* row = lik.data() + u * C;
        double denom = 0.0;
        for (std::size_t a = 0; a < C; ++a) denom += p[a] * row[a];
        ll += agg.counts[u] * std::log(denom);
        if (posterior) {
            double* w = posterior->data() + u * C;
            for (std::size_t a = 0; a < C; ++a) w[a] = agg.counts[u] * p[a] * row[a] / denom;
        }
    }
    return ll;
}

double clamp_theta(double t) { return std::clamp(t, kThetaClamp, 1.0 - kThetaClamp); }

double logit(double x) { return std::log(x / (1.0 - x)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Weighted Bernoulli objective over classes for one item.
double item_objective(const ItemStats& st, const std::vector<double>& theta) {
    double f = 0.0;
    for (std::size_t a = 0; a < theta.size(); ++a) {
        if (st.n[a] <= 0.0) continue;
        double t = clamp_theta(theta[a]);
        f += st.y[a] * std::log(t) + (st.n[a] - st.y[a]) * std::log(1.0 - t);
    }
    return f;
}

// Fisher scoring with step halving for a smooth item parameterisation.
// `eval(x, theta, jac)` fills theta[a] and jac[a * d + i] = d theta_a / d x_i.
template <class Eval>
Eigen::VectorXd fisher_scoring(Eigen::VectorXd x, const ItemStats& st, std::size_t C, Eval&& eval) {
    const int d = static_cast<int>(x.size());
    std::vector<double> theta(C), jac(C * d);
    eval(x, theta, jac);
    double f = item_objective(st, theta);
    constexpr int kMaxSteps = 50;
    for (int step = 0; step < kMaxSteps; ++step) {
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
        Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d, d);
        for (std::size_t a = 0; a < C; ++a) {
            if (st.n[a] <= 0.0) continue;
            double t = clamp_theta(theta[a]);
            double v = t * (1.0 - t);
            Eigen::Map<const Eigen::VectorXd> g(jac.data() + a * d, d);
            grad += ((st.y[a] - st.n[a] * t) / v) * g;
            info += (st.n[a] / v) * g * g.transpose();
        }
        if (grad.norm() < 1e-10) break;
        info.diagonal().array() += 1e-9 * (1.0 + info.diagonal().array().abs());
        Eigen::VectorXd delta = info.ldlt().solve(grad);
        if (!delta.allFinite()) break;
        // keep steps in the unconstrained scale bounded
        double len = delta.cwiseAbs().maxCoeff();
        if (len > 5.0) delta *= 5.0 / len;

        bool improved = false;
        double scale = 1.0;
        std::vector<double> trial_theta(C), trial_jac(C * d);
        for (int halving = 0; halving < 30; ++halving, scale *= 0.5) {
            Eigen::VectorXd trial = x + scale * delta;
            eval(trial, trial_theta, trial_jac);
            double ft = item_objective(st, trial_theta);
            if (ft >= f) {
                improved = ft > f;
                double gain = ft - f;
                x = trial;
                f = ft;
                theta.swap(trial_theta);
                jac.swap(trial_jac);
                if (gain < 1e-13 * (1.0 + std::abs(f))) improved = false;
                break;
            }
        }
        if (!improved) break;
    }
    return x;
}

std::vector<int> required_attributes(Code q, int K) {
    std::vector<int> req;
    for (int k = 0; k < K; ++k)
        if (q >> k & 1) req.push_back(k);
    return req;
}

template <class Ideal>
std::pair<double, double> slip_guess_update(const ItemStats& st, Ideal&& ideal, double s0, double g0) {
    double n1 = 0, y1 = 0, n0 = 0, y0 = 0;
    for (std::size_t a = 0; a < st.n.size(); ++a) {
        if (ideal(static_cast<Code>(a))) { n1 += st.n[a]; y1 += st.y[a]; }
        else { n0 += st.n[a]; y0 += st.y[a]; }
    }
    double s = n1 > 0 ? 1.0 - y1 / n1 : s0;
    double g = n0 > 0 ? y0 / n0 : g0;
    return {s, g};
}

}  // namespace

double loglik(const ResponseData& data, const ThetaMatrix& theta, const ProportionVector& p) {
    if (theta.items() != data.items()) throw DimensionError("theta and data have different item counts");
    if (theta.profiles() != p.size()) throw DimensionError("theta columns do not match proportion vector");
    std::vector<double> lik;
    return e_step(data.aggregate(), data.items(), theta, p.values(), lik, nullptr);
}

ItemParams m_step_item(Code q, int K, const ItemParams& start, const ItemStats& st) {
    const std::size_t C = pow2(K);
    if (st.n.size() != C || st.y.size() != C) throw DimensionError("item statistics must have 2^K entries");
    switch (family_of(start)) {
        case Family::DINA: {
            const auto& d = std::get<Dina>(start);
            auto [s, g] = slip_guess_update(st, [&](Code a) { return dominates(a, q); }, d.s, d.g);
            return Dina{s, g};
        }
        case Family::DINO: {
            const auto& d = std::get<Dino>(start);
            auto [s, g] = slip_guess_update(st, [&](Code a) { return (a & q) != 0; }, d.s, d.g);
            return Dino{s, g};
        }
        case Family::GDINA: {
            // Closed form per group of profiles sharing alpha AND q, then
            // inclusion-exclusion back to effect coefficients.
            std::map<Code, double> n, y;
            for (Code a = 0; a < C; ++a) {
                n[a & q] += st.n[a];
                y[a & q] += st.y[a];
            }
            std::map<Code, double> group_theta;
            for (Code sub = q;; sub = (sub - 1) & q) {
                group_theta[sub] = n[sub] > 0 ? y[sub] / n[sub] : item_theta(q, K, start, sub);
                if (sub == 0) break;
            }
            Gdina out;
            for (const auto& [S, unused] : group_theta) {
                double beta = 0.0;
                for (Code T = S;; T = (T - 1) & S) {
                    beta += ((popcount(S) - popcount(T)) & 1 ? -1.0 : 1.0) * group_theta[T];
                    if (T == 0) break;
                }
                out.beta[S] = beta;
            }
            return out;
        }
        case Family::LLM: {
            const auto& l = std::get<Llm>(start);
            const auto req = required_attributes(q, K);
            const int d = 1 + static_cast<int>(req.size());
            Eigen::VectorXd x(d);
            x[0] = l.beta0;
            for (std::size_t i = 0; i < req.size(); ++i) x[1 + i] = l.beta[req[i]];
            auto eval = [&](const Eigen::VectorXd& v, std::vector<double>& th, std::vector<double>& jac) {
                for (Code a = 0; a < C; ++a) {
                    double eta = v[0];
                    for (std::size_t i = 0; i < req.size(); ++i)
                        if (a >> req[i] & 1) eta += v[1 + i];
                    double t = sigmoid(eta);
                    th[a] = t;
                    double w = t * (1.0 - t);
                    jac[a * d] = w;
                    for (std::size_t i = 0; i < req.size(); ++i) jac[a * d + 1 + i] = (a >> req[i] & 1) ? w : 0.0;
                }
            };
            x = fisher_scoring(x, st, C, eval);
            Llm out = l;
            out.beta0 = x[0];
            for (std::size_t i = 0; i < req.size(); ++i) out.beta[req[i]] = x[1 + i];
            return out;
        }
        case Family::RRUM: {
            // pi = sigmoid(x_0), r_k = sigmoid(x_k) keeps every theta inside (0,1).
            const auto& rr = std::get<Rrum>(start);
            const auto req = required_attributes(q, K);
            const int d = 1 + static_cast<int>(req.size());
            auto inner = [](double v) { return std::clamp(v, 1e-9, 1.0 - 1e-9); };
            Eigen::VectorXd x(d);
            x[0] = logit(inner(rr.pi));
            for (std::size_t i = 0; i < req.size(); ++i) x[1 + i] = logit(inner(rr.r[req[i]]));
            auto eval = [&](const Eigen::VectorXd& v, std::vector<double>& th, std::vector<double>& jac) {
                for (Code a = 0; a < C; ++a) {
                    double t = sigmoid(v[0]);
                    for (std::size_t i = 0; i < req.size(); ++i)
                        if (!(a >> req[i] & 1)) t *= sigmoid(v[1 + i]);
                    th[a] = t;
                    jac[a * d] = t * (1.0 - sigmoid(v[0]));
                    for (std::size_t i = 0; i < req.size(); ++i)
                        jac[a * d + 1 + i] = (a >> req[i] & 1) ? 0.0 : t * (1.0 - sigmoid(v[1 + i]));
                }
            };
            x = fisher_scoring(x, st, C, eval);
            Rrum out = rr;
            out.pi = sigmoid(x[0]);
            for (std::size_t i = 0; i < req.size(); ++i) out.r[req[i]] = sigmoid(x[1 + i]);
            return out;
        }
    }
    throw InvalidParameterError("unknown family");
}

namespace {

ItemParams random_init(Family f, Code q, int K, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> sg(0.05, 0.3);
    const double s = sg(rng), g = sg(rng);
    const int width = popcount(q);
    switch (f) {
        case Family::DINA: return Dina{s, g};
        case Family::DINO: return Dino{s, g};
        case Family::GDINA: return gdina_from_dina(q, Dina{s, g});
        case Family::LLM: {
            std::uniform_real_distribution<double> jitter(0.8, 1.2);
            Llm l{logit(g), std::vector<double>(K, 0.0)};
            const double total = logit(1.0 - s) - logit(g);
            for (int k = 0; k < K; ++k)
                if (q >> k & 1) l.beta[k] = total / width * jitter(rng);
            return l;
        }
        case Family::RRUM: {
            std::uniform_real_distribution<double> jitter(0.9, 1.1);
            Rrum r{1.0 - s, std::vector<double>(K, 1.0)};
            const double per = std::pow(g / (1.0 - s), 1.0 / width);
            for (int k = 0; k < K; ++k)
                if (q >> k & 1) r.r[k] = std::clamp(per * jitter(rng), 0.01, 0.99);
            return r;
        }
    }
    throw InvalidParameterError("unknown family");
}

std::vector<double> random_proportions(std::size_t C, std::mt19937_64& rng) {
    std::gamma_distribution<double> gam(1.0, 1.0);
    std::vector<double> d(C);
    double sum = 0.0;
    for (auto& v : d) sum += (v = gam(rng));
    std::vector<double> p(C);
    for (std::size_t a = 0; a < C; ++a) p[a] = 0.8 / static_cast<double>(C) + 0.2 * d[a] / sum;
    return p;
}

void floor_and_normalise(std::vector<double>& p) {
    double sum = 0.0;
    for (double& v : p) sum += (v = std::max(v, kProportionFloor));
    for (double& v : p) v /= sum;
}

// theta table for fitted parameters; rounding excursions past [0,1] are clipped.
ThetaMatrix fitted_theta(const QMatrix& Q, const std::vector<ItemParams>& params) {
    const int J = Q.items(), K = Q.attributes();
    const std::size_t C = pow2(K);
    std::vector<double> v(J * C);
    for (int j = 0; j < J; ++j)
        for (Code a = 0; a < C; ++a) {
            double t = item_theta(Q.row(j), K, params[j], a);
            if (!(t > -1e-9 && t < 1.0 + 1e-9))
                throw FitError("fitted theta for item " + std::to_string(j + 1) + " left [0,1]");
            v[j * C + a] = std::clamp(t, 0.0, 1.0);
        }
    return ThetaMatrix(J, K, std::move(v));
}

struct RunResult {
    std::vector<ItemParams> params;
    std::vector<double> p;
    std::vector<double> trace;
    bool converged = false;
    int iterations = 0;
};

RunResult run_em(const ResponseData::Aggregated& agg, int J, const QMatrix& Q, std::vector<ItemParams> params,
                 std::vector<double> p, const EmConfig& cfg) {
    const int K = Q.attributes();
    const std::size_t C = pow2(K), U = agg.patterns.size();
    std::vector<double> lik, post;
    RunResult run;
    auto evaluate = [&](bool want_posterior) {
        ThetaMatrix theta = fitted_theta(Q, params);
        double ll = e_step(agg, J, theta, p, lik, want_posterior ? &post : nullptr);
        if (!std::isfinite(ll)) throw FitError("log-likelihood became non-finite during EM");
        return ll;
    };
    double ll = evaluate(true);
    run.trace.push_back(ll);
    ItemStats st{std::vector<double>(C), std::vector<double>(C)};
    for (int it = 1; it <= cfg.max_iters; ++it) {
        // class totals
        std::fill(st.n.begin(), st.n.end(), 0.0);
        for (std::size_t u = 0; u < U; ++u)
            for (std::size_t a = 0; a < C; ++a) st.n[a] += post[u * C + a];
        double total = std::accumulate(st.n.begin(), st.n.end(), 0.0);
        for (std::size_t a = 0; a < C; ++a) p[a] = st.n[a] / total;
        floor_and_normalise(p);
        for (int j = 0; j < J; ++j) {
            std::fill(st.y.begin(), st.y.end(), 0.0);
            for (std::size_t u = 0; u < U; ++u) {
                if (!(agg.patterns[u] >> j & 1)) continue;
                for (std::size_t a = 0; a < C; ++a) st.y[a] += post[u * C + a];
            }
            params[j] = m_step_item(Q.row(j), K, params[j], st);
        }
        double next = evaluate(true);
        run.trace.push_back(next);
        run.iterations = it;
        if (next - ll < cfg.tol) {
            run.converged = true;
            break;
        }
        ll = next;
    }
    run.params = std::move(params);
    run.p = std::move(p);
    return run;
}

}  // namespace

FitResult em_fit(const ResponseData& data, const QMatrix& Q, const std::vector<Family>& families,
                 const EmConfig& cfg) {
    if (data.items() != Q.items()) throw DimensionError("data and Q have different item counts");
    if (static_cast<int>(families.size()) != Q.items())
        throw DimensionError("need one family per item");
    if (cfg.restarts < 1) throw InvalidParameterError("restarts must be >= 1");
    if (cfg.max_iters < 0) throw InvalidParameterError("max_iters must be >= 0");
    const int K = Q.attributes();
    const std::size_t C = pow2(K);
    const auto agg = data.aggregate();

    std::optional<RunResult> best;
    std::vector<double> restart_ll;
    std::string last_error;
    for (int rs = 0; rs < cfg.restarts; ++rs) {
        std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rs)));
        std::vector<ItemParams> init(Q.items());
        for (int j = 0; j < Q.items(); ++j) init[j] = random_init(families[j], Q.row(j), K, rng);
        std::vector<double> p0 = random_proportions(C, rng);
        if (rs == 0 && cfg.initial_params) {
            if (cfg.initial_params->size() != init.size()) throw DimensionError("initial params need one entry per item");
            for (int j = 0; j < Q.items(); ++j)
                if (family_of((*cfg.initial_params)[j]) != families[j])
                    throw InvalidParameterError("initial params for item " + std::to_string(j + 1) +
                                                " do not match the requested family");
            init = *cfg.initial_params;
        }
        if (rs == 0 && cfg.initial_p) {
            if (cfg.initial_p->size() != C) throw DimensionError("initial p has the wrong length");
            p0.assign(cfg.initial_p->values().begin(), cfg.initial_p->values().end());
        }
        try {
            RunResult run = run_em(agg, data.items(), Q, std::move(init), std::move(p0), cfg);
            restart_ll.push_back(run.trace.back());
            if (!best || run.trace.back() > best->trace.back()) best = std::move(run);
        } catch (const FitError& e) {
            restart_ll.push_back(-INFINITY);
            last_error = e.what();
        }
    }
    if (!best) throw FitError("all EM restarts failed: " + last_error);
    ThetaMatrix theta = fitted_theta(Q, best->params);
    return FitResult{std::move(theta),           ProportionVector(best->p), std::move(best->params),
                     std::move(best->trace),     best->converged,           best->iterations,
                     cfg.restarts,               std::move(restart_ll)};
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ExperimentTable consistency_experiment(const QMatrix& Q, const std::vector<ItemParams>& true_params,
                                       const ProportionVector& true_p, const std::vector<std::size_t>& n_grid,
                                       int replications, std::uint64_t seed, const EmConfig& config) {
    if (replications < 1) throw InvalidParameterError("replications must be >= 1");
    const ThetaMatrix truth = theta_from_params(Q, true_params);
    ExperimentTable table;
    table.verdict = verdict(Q, truth).verdict;
    if (table.verdict != Verdict::IdentifiableByTheorem1)
        table.warnings.push_back("design is not covered by the sufficient identifiability conditions (" +
                                 verdict_name(table.verdict) + "); errors need not shrink with N");
    std::vector<Family> families;
    for (const auto& p : true_params) families.push_back(family_of(p));

    const int J = Q.items();
    const std::size_t G = n_grid.size();
    const std::int64_t jobs = static_cast<std::int64_t>(G) * replications;
    std::vector<double> err(jobs), perr(jobs), best_ll(jobs);
    std::vector<std::vector<double>> item_err(jobs, std::vector<double>(J));
    std::vector<std::string> failures(jobs);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t job = 0; job < jobs; ++job) {
        const std::size_t gi = static_cast<std::size_t>(job / replications);
        const std::uint64_t rep = static_cast<std::uint64_t>(job % replications);
        try {
            ResponseData data = simulate(truth, true_p, n_grid[gi], derive_seed(seed, gi + 1, rep + 1));
            EmConfig cfg = config;
            cfg.seed = derive_seed(config.seed, 1000 + gi, rep + 1);
            FitResult fit = em_fit(data, Q, families, cfg);
            double p_err = max_abs_diff(fit.p_hat, true_p);
            double worst = p_err;
            for (int j = 0; j < J; ++j) {
                double e = 0.0;
                auto a = fit.theta_hat.row(j), b = truth.row(j);
                for (std::size_t c = 0; c < a.size(); ++c) e = std::max(e, std::abs(a[c] - b[c]));
                item_err[job][j] = e;
                worst = std::max(worst, e);
            }
            err[job] = worst;
            perr[job] = p_err;
            best_ll[job] = fit.final_loglik();
        } catch (const std::exception& e) {
            failures[job] = e.what();
        }
    }
    for (const auto& f : failures)
        if (!f.empty()) throw FitError("consistency experiment replication failed: " + f);

    for (std::size_t gi = 0; gi < G; ++gi) {
        ExperimentRow row;
        row.N = n_grid[gi];
        std::vector<double> pe;
        std::vector<std::vector<double>> ie(J);
        for (int rep = 0; rep < replications; ++rep) {
            std::size_t job = gi * replications + rep;
            row.errors.push_back(err[job]);
            row.best_logliks.push_back(best_ll[job]);
            pe.push_back(perr[job]);
            for (int j = 0; j < J; ++j) ie[j].push_back(item_err[job][j]);
        }
        row.median_error = median(row.errors);
        row.median_p_error = median(pe);
        for (int j = 0; j < J; ++j) row.median_item_errors.push_back(median(ie[j]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace rlcm
