#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rumorcast/cascade.hpp"
#include "rumorcast/kernels.hpp"

namespace rumorcast {

// Simultaneous parent/child timestamps would put a diverging kernel density
// at lag 0; such lags evaluate at this floor instead (in hours).
inline constexpr double kLagEpsilonHours = 1e-6;

struct MarkCoefficients {
    double alpha{0.0};
    std::vector<double> beta_cascade;
    std::vector<double> beta_user;
    std::vector<double> beta_structural;
};

// One mixture component: mark model plus the root/non-root kernel pair.
struct ComponentParams {
    MarkCoefficients marks;
    KernelPair kernels;
};

// log m = alpha + beta . row, evaluated on the standardized (z, x, y) row.
inline double mark(const ComponentParams& params,
                   std::span<const double> row) {
    const MarkCoefficients& m = params.marks;
    if (row.size() != m.beta_cascade.size() + m.beta_user.size() +
                          m.beta_structural.size())
        throw std::invalid_argument("covariate row length mismatch");
    double u = m.alpha;
    std::size_t j = 0;
    for (double b : m.beta_cascade) u += b * row[j++];
    for (double b : m.beta_user) u += b * row[j++];
    for (double b : m.beta_structural) u += b * row[j++];
    for (double v : row)
        if (!std::isfinite(v))
            throw std::domain_error("non-finite covariate in mark row");
    return std::exp(u);
}

// --- unconstrained parameter vector -------------------------------------
//
// Layout: [alpha, beta_c.., beta_u.., beta_s.., root raw.., non-root raw..].
// Kernel parameters enter through the transforms in kernels.hpp so every
// coordinate ranges over the whole real line.
struct ParameterLayout {
    std::size_t n_cascade{0};
    std::size_t n_user{0};
    std::size_t n_structural{0};
    KernelFamily root_family{KernelFamily::PowerLaw};
    KernelFamily nonroot_family{KernelFamily::Weibull};

    static ParameterLayout for_schema(const CovariateSchema& schema,
                                      KernelFamily root,
                                      KernelFamily non_root) {
        return {schema.cascade.size(), schema.user.size(),
                schema.structural.size(), root, non_root};
    }

    std::size_t beta_dim() const { return n_cascade + n_user + n_structural; }
    std::size_t root_offset() const { return 1 + beta_dim(); }
    std::size_t nonroot_offset() const {
        return root_offset() + kernel_arity(root_family);
    }
    std::size_t dim() const {
        return nonroot_offset() + kernel_arity(nonroot_family);
    }

    ComponentParams unpack(std::span<const double> theta) const {
        if (theta.size() != dim())
            throw std::invalid_argument("parameter vector length mismatch");
        ComponentParams p;
        p.marks.alpha = theta[0];
        std::size_t j = 1;
        p.marks.beta_cascade.assign(theta.begin() + j, theta.begin() + j + n_cascade);
        j += n_cascade;
        p.marks.beta_user.assign(theta.begin() + j, theta.begin() + j + n_user);
        j += n_user;
        p.marks.beta_structural.assign(theta.begin() + j,
                                       theta.begin() + j + n_structural);
        p.kernels.root =
            kernel_from_raw(root_family, theta.subspan(root_offset()));
        p.kernels.non_root =
            kernel_from_raw(nonroot_family, theta.subspan(nonroot_offset()));
        return p;
    }

    std::vector<double> pack(const ComponentParams& p) const {
        std::vector<double> theta(dim());
        theta[0] = p.marks.alpha;
        std::size_t j = 1;
        for (double b : p.marks.beta_cascade) theta[j++] = b;
        for (double b : p.marks.beta_user) theta[j++] = b;
        for (double b : p.marks.beta_structural) theta[j++] = b;
        kernel_to_raw(p.kernels.root,
                      std::span<double>(theta).subspan(root_offset()));
        kernel_to_raw(p.kernels.non_root,
                      std::span<double>(theta).subspan(nonroot_offset()));
        return theta;
    }

    std::vector<std::string> parameter_names(const CovariateSchema& schema) const {
        std::vector<std::string> names;
        names.push_back("alpha");
        for (const auto& s : schema.cascade) names.push_back("beta_c." + s.name);
        for (const auto& s : schema.user) names.push_back("beta_u." + s.name);
        for (const auto& s : schema.structural) names.push_back("beta_s." + s.name);
        auto kernel_names = [&names](const std::string& prefix, KernelFamily f) {
            switch (f) {
                case KernelFamily::Exponential:
                    names.push_back(prefix + ".log_rate");
                    break;
                case KernelFamily::PowerLaw:
                    names.push_back(prefix + ".log_shape");
                    names.push_back(prefix + ".log_offset");
                    break;
                case KernelFamily::Weibull:
                    names.push_back(prefix + ".log_scale");
                    names.push_back(prefix + ".logit_shape");
                    break;
            }
        };
        kernel_names("root", root_family);
        kernel_names("non_root", nonroot_family);
        return names;
    }
};

// Evaluation cache for one cascade: standardized covariate rows, parent
// lags, and residual horizons. Likelihood evaluations touch nothing else.
struct PreparedCascade {
    std::string id;
    std::size_t row_dim{0};
    std::vector<double> rows;       // n_events x row_dim, row-major
    std::vector<double> times;
    std::vector<int> parent;        // -1 for the root
    std::vector<double> lag;        // t_i - t_parent (i >= 1), zero kept as-is
    std::vector<double> remaining;  // T - t_i
    double horizon{0.0};
    std::size_t tie_count{0};       // lags equal to zero (clamped on demand)

    std::size_t n_events() const { return times.size(); }
    std::span<const double> row(std::size_t i) const {
        return {rows.data() + i * row_dim, row_dim};
    }
};

inline PreparedCascade prepare(const Cascade& c, const CovariateSchema& schema,
                               const Standardizer& standardizer) {
    PreparedCascade pc;
    pc.id = c.id;
    pc.row_dim = schema.row_dim();
    pc.horizon = c.horizon_hours;
    const std::size_t n = c.events.size();
    pc.rows.resize(n * pc.row_dim);
    pc.times.resize(n);
    pc.parent.resize(n);
    pc.lag.assign(n, 0.0);
    pc.remaining.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row(pc.rows.data() + i * pc.row_dim, pc.row_dim);
        covariate_row(c, i, schema, row);
        standardizer.apply(row);
        pc.times[i] = c.events[i].time;
        pc.parent[i] = c.events[i].parent;
        pc.remaining[i] = c.horizon_hours - c.events[i].time;
        if (i > 0) {
            pc.lag[i] = c.events[i].time - c.events[c.events[i].parent].time;
            if (pc.lag[i] == 0.0) ++pc.tie_count;
        }
    }
    return pc;
}

namespace detail {

// Lag actually fed to the kernel: zero lags move to the epsilon floor when
// the density would diverge there.
inline double effective_lag(double lag, const KernelParams& k) {
    return (lag <= 0.0 && k.diverges_at_zero()) ? kLagEpsilonHours : lag;
}

inline void mark_exponents(const ComponentParams& params,
                           const PreparedCascade& pc,
                           std::vector<double>& out) {
    const MarkCoefficients& m = params.marks;
    const std::size_t n = pc.n_events();
    out.resize(n);
    std::vector<double> beta;
    beta.reserve(pc.row_dim);
    beta.insert(beta.end(), m.beta_cascade.begin(), m.beta_cascade.end());
    beta.insert(beta.end(), m.beta_user.begin(), m.beta_user.end());
    beta.insert(beta.end(), m.beta_structural.begin(), m.beta_structural.end());
    if (beta.size() != pc.row_dim)
        throw std::invalid_argument("cascade '" + pc.id +
                                    "': covariate row/coefficient mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = pc.rows.data() + i * pc.row_dim;
        double u = m.alpha;
        for (std::size_t j = 0; j < pc.row_dim; ++j) u += beta[j] * row[j];
        out[i] = u;
    }
}

}  // namespace detail

// lambda(t): sum of mark-scaled kernel densities of all strictly earlier
// events. The root uses the root kernel, every retweet the non-root one.
inline double intensity(const ComponentParams& params,
                        const PreparedCascade& pc, double t) {
    if (t < 0.0 || t > pc.horizon)
        throw std::domain_error("intensity time outside [0, horizon]");
    std::vector<double> u;
    detail::mark_exponents(params, pc, u);
    double total = 0.0;
    for (std::size_t i = 0; i < pc.n_events(); ++i) {
        if (!(pc.times[i] < t)) break;
        const KernelParams& k =
            i == 0 ? params.kernels.root : params.kernels.non_root;
        total += std::exp(u[i]) * kernel_density(k, t - pc.times[i]);
    }
    return total;
}

inline double intensity(const ComponentParams& params, const Cascade& c,
                        const CovariateSchema& schema,
                        const Standardizer& standardizer, double t) {
    return intensity(params, prepare(c, schema, standardizer), t);
}

// Branching form: each event is attributed to its observed parent, which
// drops the inner sum over the whole history. O(n).
inline double log_likelihood_branching(const ComponentParams& params,
                                       const PreparedCascade& pc) {
    std::vector<double> u;
    detail::mark_exponents(params, pc, u);
    double ll = 0.0;
    for (std::size_t i = 1; i < pc.n_events(); ++i) {
        const int p = pc.parent[i];
        const KernelParams& k =
            p == 0 ? params.kernels.root : params.kernels.non_root;
        ll += u[p] + kernel_log_density(k, detail::effective_lag(pc.lag[i], k));
    }
    for (std::size_t i = 0; i < pc.n_events(); ++i) {
        const KernelParams& k =
            i == 0 ? params.kernels.root : params.kernels.non_root;
        ll -= std::exp(u[i]) * kernel_integral(k, pc.remaining[i]);
    }
    return ll;
}

// Full marked-Hawkes log-likelihood with the O(n^2) inner sum over all
// predecessors. Kept as a diagnostic oracle; fitting uses the branching form.
inline double log_likelihood_full(const ComponentParams& params,
                                  const PreparedCascade& pc) {
    std::vector<double> u;
    detail::mark_exponents(params, pc, u);
    double ll = 0.0;
    for (std::size_t i = 1; i < pc.n_events(); ++i) {
        double lam = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const KernelParams& k =
                j == 0 ? params.kernels.root : params.kernels.non_root;
            const double s = pc.times[i] - pc.times[j];
            lam += std::exp(u[j]) * kernel_density(k, detail::effective_lag(s, k));
        }
        ll += std::log(lam);
    }
    for (std::size_t i = 0; i < pc.n_events(); ++i) {
        const KernelParams& k =
            i == 0 ? params.kernels.root : params.kernels.non_root;
        ll -= std::exp(u[i]) * kernel_integral(k, pc.remaining[i]);
    }
    return ll;
}

// --- priors --------------------------------------------------------------
//
// Standard normal on every beta, normal(0, 5) on alpha, standard Cauchy on
// the raw variable behind each positive kernel parameter, standard normal
// on the raw variable behind the Weibull shape.
namespace detail {

inline constexpr double kLogSqrt2Pi = 0.9189385332046727;

inline double log_normal_pdf(double x, double sd) {
    const double z = x / sd;
    return -kLogSqrt2Pi - std::log(sd) - 0.5 * z * z;
}

inline double log_cauchy_pdf(double x) {
    return -std::log(M_PI) - std::log1p(x * x);
}

// Per-raw-coordinate prior for a kernel family on the unconstrained scale.
inline void kernel_raw_prior(KernelFamily f, std::span<const double> raw,
                             double& lp, std::span<double> grad) {
    const std::size_t arity = kernel_arity(f);
    for (std::size_t j = 0; j < arity; ++j) {
        const bool shape_raw = (f == KernelFamily::Weibull && j == 1);
        if (shape_raw) {
            lp += log_normal_pdf(raw[j], 1.0);
            if (!grad.empty()) grad[j] += -raw[j];
        } else {
            lp += log_cauchy_pdf(raw[j]);
            if (!grad.empty())
                grad[j] += -2.0 * raw[j] / (1.0 + raw[j] * raw[j]);
        }
    }
}

}  // namespace detail

inline double log_prior(const ParameterLayout& layout,
                        std::span<const double> theta,
                        std::span<double> grad = {}) {
    if (theta.size() != layout.dim())
        throw std::invalid_argument("parameter vector length mismatch");
    double lp = detail::log_normal_pdf(theta[0], 5.0);
    if (!grad.empty()) grad[0] += -theta[0] / 25.0;
    for (std::size_t j = 1; j < layout.root_offset(); ++j) {
        lp += detail::log_normal_pdf(theta[j], 1.0);
        if (!grad.empty()) grad[j] += -theta[j];
    }
    detail::kernel_raw_prior(
        layout.root_family, theta.subspan(layout.root_offset()), lp,
        grad.empty() ? grad : grad.subspan(layout.root_offset()));
    detail::kernel_raw_prior(
        layout.nonroot_family, theta.subspan(layout.nonroot_offset()), lp,
        grad.empty() ? grad : grad.subspan(layout.nonroot_offset()));
    return lp;
}

// --- posterior and gradient ----------------------------------------------

// Branching log-likelihood of one cascade plus its gradient with respect to
// the unconstrained parameter vector, accumulated into grad.
inline double log_likelihood_branching_grad(const ParameterLayout& layout,
                                            const ComponentParams& params,
                                            const PreparedCascade& pc,
                                            std::span<double> grad) {
    std::vector<double> u;
    detail::mark_exponents(params, pc, u);
    const std::size_t n = pc.n_events();
    const std::size_t bdim = pc.row_dim;
    double ll = 0.0;
    double kgrad[2];

    for (std::size_t i = 1; i < n; ++i) {
        const int p = pc.parent[i];
        const bool from_root = (p == 0);
        const KernelParams& k =
            from_root ? params.kernels.root : params.kernels.non_root;
        const double s = detail::effective_lag(pc.lag[i], k);
        ll += u[p] + kernel_log_density(k, s);
        grad[0] += 1.0;
        const double* prow = pc.rows.data() + static_cast<std::size_t>(p) * bdim;
        for (std::size_t j = 0; j < bdim; ++j) grad[1 + j] += prow[j];
        const std::size_t off =
            from_root ? layout.root_offset() : layout.nonroot_offset();
        kernel_log_density_grad_raw(k, s, std::span<double>(kgrad, 2));
        for (std::size_t j = 0; j < kernel_arity(k.family); ++j)
            grad[off + j] += kgrad[j];
    }

    for (std::size_t i = 0; i < n; ++i) {
        const bool is_root = (i == 0);
        const KernelParams& k =
            is_root ? params.kernels.root : params.kernels.non_root;
        const double m = std::exp(u[i]);
        const double cap = kernel_integral(k, pc.remaining[i]);
        const double weight = m * cap;
        ll -= weight;
        grad[0] -= weight;
        const double* row = pc.rows.data() + i * bdim;
        for (std::size_t j = 0; j < bdim; ++j) grad[1 + j] -= weight * row[j];
        const std::size_t off =
            is_root ? layout.root_offset() : layout.nonroot_offset();
        kernel_integral_grad_raw(k, pc.remaining[i], std::span<double>(kgrad, 2));
        for (std::size_t j = 0; j < kernel_arity(k.family); ++j)
            grad[off + j] -= m * kgrad[j];
    }
    return ll;
}

struct PosteriorValue {
    double value{0.0};
    std::vector<double> gradient;
};

// Log posterior over a training set: sum of branching log-likelihoods plus
// the prior, with its analytic gradient. NaNs abort with the cascade id;
// -inf is legal (a rejected region, not an error).
inline PosteriorValue log_posterior_and_gradient(
    const ParameterLayout& layout, std::span<const double> theta,
    std::span<const PreparedCascade> cascades) {
    if (cascades.empty())
        throw std::invalid_argument("log_posterior: empty training set");
    PosteriorValue out;
    out.gradient.assign(layout.dim(), 0.0);
    const ComponentParams params = layout.unpack(theta);
    for (const PreparedCascade& pc : cascades) {
        const double ll =
            log_likelihood_branching_grad(layout, params, pc, out.gradient);
        if (std::isnan(ll))
            throw std::runtime_error("log_posterior: non-finite value on cascade '" +
                                     pc.id + "'");
        out.value += ll;
    }
    out.value += log_prior(layout, theta, out.gradient);
    return out;
}

inline double log_posterior(const ParameterLayout& layout,
                            std::span<const double> theta,
                            std::span<const PreparedCascade> cascades) {
    if (cascades.empty())
        throw std::invalid_argument("log_posterior: empty training set");
    const ComponentParams params = layout.unpack(theta);
    double value = 0.0;
    for (const PreparedCascade& pc : cascades) {
        const double ll = log_likelihood_branching(params, pc);
        if (std::isnan(ll))
            throw std::runtime_error("log_posterior: non-finite value on cascade '" +
                                     pc.id + "'");
        value += ll;
    }
    return value + log_prior(layout, theta);
}

}  // namespace rumorcast
