#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rumorcast/hawkes.hpp"
#include "rumorcast/rng.hpp"

namespace rumorcast {

// --- MAP -------------------------------------------------------------------

struct OptimizerConfig {
    std::size_t max_iterations{500};
    double gradient_tolerance{1e-5};
    std::size_t history{8};  // quasi-Newton memory
};

struct MapResult {
    std::vector<double> point;
    double objective{-std::numeric_limits<double>::infinity()};
    double gradient_norm{std::numeric_limits<double>::infinity()};
    std::size_t iterations{0};
    bool converged{false};
    std::vector<std::string> warnings;
};

namespace detail {

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace detail

// Maximizes a smooth objective by L-BFGS ascent with Armijo backtracking.
// The callable evaluates the objective and writes its gradient.
template <typename F>
MapResult maximize(F&& objective_grad, std::span<const double> init,
                   const OptimizerConfig& cfg = {}) {
    const std::size_t dim = init.size();
    MapResult res;
    res.point.assign(init.begin(), init.end());
    std::vector<double> grad(dim, 0.0);
    double value = objective_grad(std::span<const double>(res.point), grad);
    if (!std::isfinite(value))
        throw std::runtime_error("optimizer: objective non-finite at the initial point");

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> direction(dim), trial(dim), trial_grad(dim);
    std::vector<double> prev_point, prev_grad;

    for (res.iterations = 0; res.iterations < cfg.max_iterations;
         ++res.iterations) {
        res.gradient_norm = detail::norm2(grad);
        if (res.gradient_norm <= cfg.gradient_tolerance) {
            res.converged = true;
            break;
        }

        // two-loop recursion on the negated (descent) problem
        direction = grad;
        std::vector<double> alpha_buf(s_hist.size());
        for (std::size_t h = s_hist.size(); h-- > 0;) {
            double a = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                a += s_hist[h][j] * direction[j];
            a *= rho_hist[h];
            alpha_buf[h] = a;
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] -= a * y_hist[h][j];
        }
        if (!s_hist.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                sy += s_hist.back()[j] * y_hist.back()[j];
                yy += y_hist.back()[j] * y_hist.back()[j];
            }
            const double scale = yy > 0.0 ? sy / yy : 1.0;
            for (double& d : direction) d *= scale;
        }
        for (std::size_t h = 0; h < s_hist.size(); ++h) {
            double b = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                b += y_hist[h][j] * direction[j];
            b *= rho_hist[h];
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] += s_hist[h][j] * (alpha_buf[h] - b);
        }
        double dir_dot_grad = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
            dir_dot_grad += direction[j] * grad[j];
        if (!(dir_dot_grad > 0.0)) {  // not an ascent direction; reset memory
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            direction = grad;
            dir_dot_grad = detail::norm2(grad);
            dir_dot_grad *= dir_dot_grad;
        }

        // Armijo backtracking
        double step = 1.0;
        double trial_value = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (std::size_t j = 0; j < dim; ++j)
                trial[j] = res.point[j] + step * direction[j];
            std::fill(trial_grad.begin(), trial_grad.end(), 0.0);
            trial_value =
                objective_grad(std::span<const double>(trial), trial_grad);
            if (std::isfinite(trial_value) &&
                trial_value >= value + 1e-4 * step * dir_dot_grad) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no ascent possible at machine-scale steps

        prev_point = res.point;
        prev_grad = grad;
        res.point = trial;
        grad = trial_grad;
        value = trial_value;

        std::vector<double> s_vec(dim), y_vec(dim);
        double sy = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            s_vec[j] = res.point[j] - prev_point[j];
            y_vec[j] = prev_grad[j] - grad[j];  // curvature of the descent problem
            sy += s_vec[j] * y_vec[j];
        }
        if (sy > 1e-12) {
            s_hist.push_back(std::move(s_vec));
            y_hist.push_back(std::move(y_vec));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > cfg.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
    }
    res.objective = value;
    res.gradient_norm = detail::norm2(grad);
    if (!res.converged && res.gradient_norm <= cfg.gradient_tolerance)
        res.converged = true;
    if (!res.converged)
        res.warnings.push_back("optimizer stopped before reaching gradient tolerance (|g| = " +
                               std::to_string(res.gradient_norm) + ")");
    return res;
}

// Default initialization: betas at zero, alpha at the log of the empirical
// branching factor, kernel raws at zero.
inline std::vector<double> default_init(
    const ParameterLayout& layout, std::span<const PreparedCascade> cascades) {
    std::size_t events = 0, retweets = 0;
    for (const auto& pc : cascades) {
        events += pc.n_events();
        retweets += pc.n_events() - 1;
    }
    std::vector<double> theta(layout.dim(), 0.0);
    const double ratio =
        events > 0 ? static_cast<double>(retweets) / static_cast<double>(events)
                   : 1.0;
    theta[0] = std::log(std::max(ratio, 1e-3));
    return theta;
}

inline MapResult fit_map(const ParameterLayout& layout,
                         std::span<const PreparedCascade> cascades,
                         std::span<const double> init,
                         const OptimizerConfig& cfg = {}) {
    auto target = [&](std::span<const double> theta, std::span<double> grad) {
        PosteriorValue pv = log_posterior_and_gradient(layout, theta, cascades);
        std::copy(pv.gradient.begin(), pv.gradient.end(), grad.begin());
        return pv.value;
    };
    return maximize(target, init, cfg);
}

// --- MCMC --------------------------------------------------------------

struct SamplerConfig {
    std::size_t chains{2};
    std::size_t warmup{1000};
    std::size_t samples_per_chain{3000};
    double target_accept{0.8};
    std::size_t max_leapfrog{32};
    std::uint64_t seed{0};
    bool parallel_chains{true};
    double init_jitter{0.5};

    void validate() const {
        if (chains < 1 || warmup < 1 || samples_per_chain < 1)
            throw std::invalid_argument(
                "sampler config: chains, warmup and samples must be positive");
        if (!(target_accept > 0.0 && target_accept < 1.0))
            throw std::invalid_argument("sampler config: target acceptance must lie in (0,1)");
        if (max_leapfrog < 1)
            throw std::invalid_argument("sampler config: max_leapfrog must be >= 1");
    }
};

struct FitDiagnostics {
    std::vector<double> r_hat;
    std::vector<double> ess;
    std::size_t divergences{0};
    double divergence_fraction{0.0};
    double mean_accept{0.0};
    std::size_t tie_clamps{0};
    std::vector<std::string> warnings;

    double max_r_hat() const {
        double m = 0.0;
        for (double r : r_hat) m = std::max(m, r);
        return m;
    }
};

struct PosteriorFit {
    std::size_t chains{0};
    std::size_t warmup{0};
    std::size_t samples_per_chain{0};
    std::uint64_t seed{0};
    std::size_t dim{0};
    std::vector<std::string> parameter_names;
    std::vector<double> draws;  // chain-major rows of unconstrained vectors
    std::vector<double> map_point;
    FitDiagnostics diagnostics;

    std::size_t num_draws() const { return dim == 0 ? 0 : draws.size() / dim; }
    std::span<const double> draw(std::size_t i) const {
        return {draws.data() + i * dim, dim};
    }
};

namespace detail {

inline constexpr double kDivergenceEnergy = 1000.0;

struct HmcChainResult {
    std::vector<double> draws;
    std::size_t divergences{0};
    double step_size{0.0};
    double accept_sum{0.0};
};

template <typename F>
double leapfrog(F&& target, std::vector<double>& q, std::vector<double>& p,
                std::vector<double>& grad, double& value,
                std::span<const double> inv_mass, double eps, std::size_t steps) {
    const std::size_t dim = q.size();
    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t j = 0; j < dim; ++j) p[j] += 0.5 * eps * grad[j];
        for (std::size_t j = 0; j < dim; ++j) q[j] += eps * p[j] * inv_mass[j];
        std::fill(grad.begin(), grad.end(), 0.0);
        value = target(std::span<const double>(q), std::span<double>(grad));
        if (!std::isfinite(value)) return std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 0; j < dim; ++j) p[j] += 0.5 * eps * grad[j];
    }
    double kinetic = 0.0;
    for (std::size_t j = 0; j < dim; ++j) kinetic += p[j] * p[j] * inv_mass[j];
    return -value + 0.5 * kinetic;
}

template <typename F>
double find_reasonable_epsilon(F&& target, std::span<const double> q0,
                               std::span<const double> mass,
                               std::span<const double> inv_mass,
                               std::mt19937_64& rng) {
    const std::size_t dim = q0.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    double eps = 1.0;
    std::vector<double> q(q0.begin(), q0.end()), p0(dim), grad0(dim, 0.0);
    const double value0 =
        target(std::span<const double>(q), std::span<double>(grad0));
    for (std::size_t j = 0; j < dim; ++j)
        p0[j] = normal(rng) * std::sqrt(mass[j]);
    double h0 = -value0;
    for (std::size_t j = 0; j < dim; ++j)
        h0 += 0.5 * p0[j] * p0[j] * inv_mass[j];

    auto energy_after_step = [&](double step) {
        std::vector<double> ql(q0.begin(), q0.end()), pl(p0), gl(grad0);
        double vl = value0;
        return leapfrog(target, ql, pl, gl, vl, inv_mass, step, 1);
    };

    double h1 = energy_after_step(eps);
    double ratio = std::isfinite(h1) ? std::exp(h0 - h1) : 0.0;
    const double dir = ratio > 0.5 ? 1.0 : -1.0;
    for (int iter = 0; iter < 60; ++iter) {
        if (dir > 0.0 && !(ratio > 0.5)) break;
        if (dir < 0.0 && !(ratio < 0.5)) break;
        eps *= dir > 0.0 ? 2.0 : 0.5;
        if (eps > 1e7 || eps < 1e-10) break;
        h1 = energy_after_step(eps);
        ratio = std::isfinite(h1) ? std::exp(h0 - h1) : 0.0;
    }
    return eps;
}

// One chain of jittered fixed-length HMC. Step size adapts by dual
// averaging over the warmup; a diagonal mass matrix is estimated from the
// middle warmup window.
template <typename F>
HmcChainResult hmc_chain(F&& target, std::span<const double> init,
                         const SamplerConfig& cfg, std::uint64_t chain_seed) {
    const std::size_t dim = init.size();
    std::mt19937_64 rng(chain_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> q(init.begin(), init.end());
    std::vector<double> grad(dim, 0.0);
    double value = target(std::span<const double>(q), std::span<double>(grad));
    if (!std::isfinite(value))
        throw std::runtime_error("sampler: non-finite log density at the initial point");

    std::vector<double> mass(dim, 1.0), inv_mass(dim, 1.0);
    double eps =
        find_reasonable_epsilon(target, q, mass, inv_mass, rng);

    // dual averaging state
    double mu = std::log(10.0 * eps);
    double h_bar = 0.0, log_eps_bar = std::log(eps);
    double da_count = 0.0;
    const double gamma = 0.05, t0 = 10.0, kappa = 0.75;

    // diagonal mass from the middle half of warmup
    const std::size_t mass_begin = cfg.warmup / 4;
    const std::size_t mass_end = (3 * cfg.warmup) / 4;
    std::vector<double> wf_mean(dim, 0.0), wf_m2(dim, 0.0);
    std::size_t wf_n = 0;

    HmcChainResult res;
    res.draws.reserve(cfg.samples_per_chain * dim);

    std::vector<double> p(dim), q_new(dim), grad_new(dim);
    const std::size_t total = cfg.warmup + cfg.samples_per_chain;
    for (std::size_t iter = 0; iter < total; ++iter) {
        if (iter == cfg.warmup) eps = std::exp(log_eps_bar);

        for (std::size_t j = 0; j < dim; ++j)
            p[j] = normal(rng) * std::sqrt(mass[j]);
        double h0 = -value;
        for (std::size_t j = 0; j < dim; ++j)
            h0 += 0.5 * p[j] * p[j] * inv_mass[j];

        q_new = q;
        grad_new = grad;
        double value_new = value;
        const std::size_t steps =
            1 + static_cast<std::size_t>(unif(rng) * static_cast<double>(cfg.max_leapfrog));
        const double h1 = leapfrog(target, q_new, p, grad_new, value_new,
                                   inv_mass, eps, steps);
        const double delta_h = h1 - h0;
        const bool divergent =
            !std::isfinite(delta_h) || delta_h > kDivergenceEnergy;
        const double accept_prob =
            divergent ? 0.0 : std::min(1.0, std::exp(-delta_h));
        if (!divergent && unif(rng) < accept_prob) {
            q.swap(q_new);
            grad.swap(grad_new);
            value = value_new;
        }

        if (iter < cfg.warmup) {
            da_count += 1.0;
            const double frac = 1.0 / (da_count + t0);
            h_bar = (1.0 - frac) * h_bar + frac * (cfg.target_accept - accept_prob);
            const double log_eps =
                mu - std::sqrt(da_count) / gamma * h_bar;
            const double eta = std::pow(da_count, -kappa);
            log_eps_bar = eta * log_eps + (1.0 - eta) * log_eps_bar;
            eps = std::exp(log_eps);

            if (iter >= mass_begin && iter < mass_end) {
                ++wf_n;
                for (std::size_t j = 0; j < dim; ++j) {
                    const double delta = q[j] - wf_mean[j];
                    wf_mean[j] += delta / static_cast<double>(wf_n);
                    wf_m2[j] += delta * (q[j] - wf_mean[j]);
                }
            }
            if (iter + 1 == mass_end && wf_n > 10) {
                const double n = static_cast<double>(wf_n);
                for (std::size_t j = 0; j < dim; ++j) {
                    const double var = wf_m2[j] / (n - 1.0);
                    // shrink toward unity like a weak prior on the scale
                    mass[j] = std::max((n / (n + 5.0)) * var + (5.0 / (n + 5.0)) * 1e-3,
                                       1e-8);
                    inv_mass[j] = 1.0 / mass[j];
                }
                eps = find_reasonable_epsilon(target, q, mass, inv_mass, rng);
                mu = std::log(10.0 * eps);
                h_bar = 0.0;
                log_eps_bar = std::log(eps);
                da_count = 0.0;
            }
        } else {
            res.draws.insert(res.draws.end(), q.begin(), q.end());
            res.accept_sum += accept_prob;
            if (divergent) ++res.divergences;
        }
    }
    res.step_size = eps;
    return res;
}

}  // namespace detail

// Split R-hat and effective sample size per parameter over chain-major
// draws. A single chain is allowed (the split still gives two sequences)
// but flagged as less sensitive.
inline FitDiagnostics compute_diagnostics(std::span<const double> draws,
                                          std::size_t chains, std::size_t dim) {
    if (chains < 1) throw std::invalid_argument("diagnostics: need at least one chain");
    if (dim == 0 || draws.size() % (chains * dim) != 0)
        throw std::invalid_argument("diagnostics: draw matrix shape mismatch");
    const std::size_t per_chain = draws.size() / (chains * dim);
    if (per_chain < 10)
        throw std::invalid_argument("diagnostics: need at least 10 draws per chain");

    FitDiagnostics diag;
    if (chains == 1)
        diag.warnings.push_back(
            "diagnostics computed from a single chain; split halves only "
            "(reduced sensitivity)");

    const std::size_t half = per_chain / 2;
    const std::size_t m = 2 * chains;  // split sequences
    diag.r_hat.resize(dim);
    diag.ess.resize(dim);

    std::vector<double> seq(half);
    std::vector<std::vector<double>> seqs(m, std::vector<double>(half));
    for (std::size_t param = 0; param < dim; ++param) {
        for (std::size_t c = 0; c < chains; ++c) {
            for (std::size_t i = 0; i < half; ++i) {
                seqs[2 * c][i] = draws[(c * per_chain + i) * dim + param];
                seqs[2 * c + 1][i] =
                    draws[(c * per_chain + half + i) * dim + param];
            }
        }
        std::vector<double> means(m), vars(m);
        double grand = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            double mu = 0.0;
            for (double v : seqs[s]) mu += v;
            mu /= static_cast<double>(half);
            double v2 = 0.0;
            for (double v : seqs[s]) v2 += (v - mu) * (v - mu);
            means[s] = mu;
            vars[s] = v2 / static_cast<double>(half - 1);
            grand += mu;
        }
        grand /= static_cast<double>(m);
        double b = 0.0, w = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            b += (means[s] - grand) * (means[s] - grand);
            w += vars[s];
        }
        b *= static_cast<double>(half) / static_cast<double>(m - 1);
        w /= static_cast<double>(m);
        const double n = static_cast<double>(half);
        const double var_plus = (n - 1.0) / n * w + b / n;
        diag.r_hat[param] = w > 0.0 ? std::sqrt(var_plus / w) : 1.0;

        // ESS via the variogram estimator with Geyer's initial positive
        // sequence truncation.
        if (var_plus <= 0.0 || w <= 0.0) {
            diag.ess[param] = static_cast<double>(m * half);
            continue;
        }
        double sum_rho = 0.0;
        double prev_pair = std::numeric_limits<double>::infinity();
        for (std::size_t t = 1; t + 1 < half; t += 2) {
            auto rho_at = [&](std::size_t lag) {
                double vario = 0.0;
                for (std::size_t s = 0; s < m; ++s)
                    for (std::size_t i = 0; i + lag < half; ++i) {
                        const double d = seqs[s][i + lag] - seqs[s][i];
                        vario += d * d;
                    }
                vario /= static_cast<double>(m * (half - lag));
                return 1.0 - vario / (2.0 * var_plus);
            };
            const double pair = rho_at(t) + rho_at(t + 1);
            if (pair < 0.0) break;
            const double capped = std::min(pair, prev_pair);
            sum_rho += capped;
            prev_pair = capped;
        }
        const double total = static_cast<double>(m * half);
        diag.ess[param] = std::min(total, total / (1.0 + 2.0 * sum_rho));
    }
    return diag;
}

// Generic HMC driver over an arbitrary smooth log density; chains run in
// parallel and merge in chain order so results depend only on the seed.
template <typename F>
PosteriorFit sample_hmc(F&& target, std::span<const double> init,
                        const SamplerConfig& cfg) {
    cfg.validate();
    const std::size_t dim = init.size();
    std::vector<detail::HmcChainResult> results(cfg.chains);
    std::vector<std::vector<double>> inits(cfg.chains);
    for (std::size_t c = 0; c < cfg.chains; ++c) {
        inits[c].assign(init.begin(), init.end());
        std::mt19937_64 rng = make_rng(cfg.seed, 1000 + c);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (double& x : inits[c]) x += cfg.init_jitter * normal(rng);
    }

    auto run_chain = [&](std::size_t c) {
        results[c] = detail::hmc_chain(target, inits[c], cfg,
                                       derive_seed(cfg.seed, c));
    };
    if (cfg.parallel_chains && cfg.chains > 1) {
        std::vector<std::thread> workers;
        workers.reserve(cfg.chains);
        for (std::size_t c = 0; c < cfg.chains; ++c)
            workers.emplace_back(run_chain, c);
        for (auto& w : workers) w.join();
    } else {
        for (std::size_t c = 0; c < cfg.chains; ++c) run_chain(c);
    }

    PosteriorFit fit;
    fit.chains = cfg.chains;
    fit.warmup = cfg.warmup;
    fit.samples_per_chain = cfg.samples_per_chain;
    fit.seed = cfg.seed;
    fit.dim = dim;
    fit.draws.reserve(cfg.chains * cfg.samples_per_chain * dim);
    std::size_t divergences = 0;
    double accept_sum = 0.0;
    for (const auto& r : results) {
        fit.draws.insert(fit.draws.end(), r.draws.begin(), r.draws.end());
        divergences += r.divergences;
        accept_sum += r.accept_sum;
    }
    const std::size_t total_draws = cfg.chains * cfg.samples_per_chain;
    if (divergences == total_draws)
        throw std::runtime_error("sampler: every post-warmup transition diverged");

    fit.diagnostics = compute_diagnostics(fit.draws, cfg.chains, dim);
    fit.diagnostics.divergences = divergences;
    fit.diagnostics.divergence_fraction =
        static_cast<double>(divergences) / static_cast<double>(total_draws);
    fit.diagnostics.mean_accept = accept_sum / static_cast<double>(total_draws);
    if (fit.diagnostics.divergence_fraction > 0.01)
        fit.diagnostics.warnings.push_back(
            "divergent transitions above 1% of draws (" +
            std::to_string(divergences) + "/" + std::to_string(total_draws) + ")");
    return fit;
}

// Posterior sampling for one mixture component. Also computes the MAP point
// (deterministic, prior-regularized) for fast evidence evaluation.
inline PosteriorFit fit_mcmc(const ParameterLayout& layout,
                             std::span<const PreparedCascade> cascades,
                             const CovariateSchema& schema,
                             const SamplerConfig& cfg,
                             const OptimizerConfig& opt_cfg = {}) {
    cfg.validate();
    if (cascades.empty())
        throw std::invalid_argument("fit_mcmc: empty training set");
    auto target = [&](std::span<const double> theta, std::span<double> grad) {
        PosteriorValue pv = log_posterior_and_gradient(layout, theta, cascades);
        std::copy(pv.gradient.begin(), pv.gradient.end(), grad.begin());
        return pv.value;
    };
    const std::vector<double> init = default_init(layout, cascades);
    PosteriorFit fit = sample_hmc(target, init, cfg);
    fit.parameter_names = layout.parameter_names(schema);
    MapResult map = fit_map(layout, cascades, init, opt_cfg);
    fit.map_point = std::move(map.point);
    for (const auto& w : map.warnings) fit.diagnostics.warnings.push_back(w);
    std::size_t ties = 0;
    for (const auto& pc : cascades) ties += pc.tie_count;
    fit.diagnostics.tie_clamps = ties;
    if (ties > 0)
        fit.diagnostics.warnings.push_back(
            std::to_string(ties) + " zero lag(s) clamped to epsilon");
    return fit;
}

// MAP-only variant: the single stored draw is the MAP point itself.
inline PosteriorFit fit_map_only(const ParameterLayout& layout,
                                 std::span<const PreparedCascade> cascades,
                                 const CovariateSchema& schema,
                                 std::uint64_t seed,
                                 const OptimizerConfig& opt_cfg = {}) {
    if (cascades.empty())
        throw std::invalid_argument("fit_map_only: empty training set");
    const std::vector<double> init = default_init(layout, cascades);
    MapResult map = fit_map(layout, cascades, init, opt_cfg);
    PosteriorFit fit;
    fit.chains = 1;
    fit.warmup = 0;
    fit.samples_per_chain = 1;
    fit.seed = seed;
    fit.dim = layout.dim();
    fit.parameter_names = layout.parameter_names(schema);
    fit.draws = map.point;
    fit.map_point = std::move(map.point);
    fit.diagnostics.warnings = std::move(map.warnings);
    std::size_t ties = 0;
    for (const auto& pc : cascades) ties += pc.tie_count;
    fit.diagnostics.tie_clamps = ties;
    return fit;
}

}  // namespace rumorcast
