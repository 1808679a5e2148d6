#pragma once

// Test-only helpers: quadrature, random cascades, and an independent naive
// implementation of the branching log-likelihood used as the oracle for the
// production evaluation path. None of this may call into the code it checks
// beyond plain data types.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "rumorcast/cascade.hpp"
#include "rumorcast/hawkes.hpp"
#include "rumorcast/kernels.hpp"

namespace testsupport {

// --- adaptive Simpson quadrature ----------------------------------------

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0,
                                depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0,
                                depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-11,
                               int depth = 60) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Quadrature of a kernel density over [0, S]. The Weibull density with
// shape < 1 has an integrable singularity at 0, removed by the change of
// variables s = t^(1/shape).
inline double quadrature_kernel_mass(const rumorcast::KernelParams& k,
                                     double upper) {
    using rumorcast::KernelFamily;
    if (upper <= 0.0) return 0.0;
    if (k.family == KernelFamily::Weibull && k.params[1] < 1.0) {
        const double shape = k.params[1];
        const double p = 1.0 / shape;
        auto g = [&](double t) {
            const double s = std::pow(t, p);
            const double dens = rumorcast::kernel_density(k, s);
            return dens * p * std::pow(t, p - 1.0);
        };
        const double t_upper = std::pow(upper, shape);
        // mass below t0 is at most t0 / scale^shape; keep it under 1e-13
        const double t0 =
            std::min(1e-13 * std::pow(k.params[0], shape), 0.5 * t_upper);
        return adaptive_simpson(g, t0, t_upper);
    }
    auto f = [&](double s) { return rumorcast::kernel_density(k, s); };
    return adaptive_simpson(f, 0.0, upper);
}

// --- independent naive likelihood oracle ----------------------------------
//
// Formulas written out directly from the closed forms; shares no evaluation
// code with the library.

struct NaiveKernel {
    int family;  // 0 exp, 1 power law, 2 weibull
    double a, b;
};

inline double naive_density(const NaiveKernel& k, double s) {
    if (k.family == 0) return k.a * std::exp(-k.a * s);
    if (k.family == 1)
        return k.a * std::pow(k.b, k.a) / std::pow(s + k.b, k.a + 1.0);
    return (k.b / k.a) * std::pow(s / k.a, k.b - 1.0) *
           std::exp(-std::pow(s / k.a, k.b));
}

inline double naive_mass(const NaiveKernel& k, double s) {
    if (k.family == 0) return 1.0 - std::exp(-k.a * s);
    if (k.family == 1) return 1.0 - std::pow(k.b / (s + k.b), k.a);
    return 1.0 - std::exp(-std::pow(s / k.a, k.b));
}

struct NaiveModel {
    double alpha;
    std::vector<double> beta;  // concatenated (z, x, y) coefficients
    NaiveKernel root, non_root;
};

// Event rows are the standardized covariate rows; parent[i] < i; horizon T.
inline double naive_branching_loglik(const NaiveModel& model,
                                     const std::vector<std::vector<double>>& rows,
                                     const std::vector<double>& times,
                                     const std::vector<int>& parent, double T,
                                     double lag_epsilon = 1e-6) {
    const std::size_t n = times.size();
    std::vector<double> marks(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = model.alpha;
        for (std::size_t j = 0; j < model.beta.size(); ++j)
            u += model.beta[j] * rows[i][j];
        marks[i] = std::exp(u);
    }
    double ll = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int p = parent[i];
        const NaiveKernel& k = p == 0 ? model.root : model.non_root;
        double lag = times[i] - times[p];
        const bool diverging = k.family == 2 && k.b < 1.0;
        if (lag <= 0.0 && diverging) lag = lag_epsilon;
        ll += std::log(marks[p]) + std::log(naive_density(k, lag));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const NaiveKernel& k = i == 0 ? model.root : model.non_root;
        ll -= marks[i] * naive_mass(k, T - times[i]);
    }
    return ll;
}

// --- random inputs -------------------------------------------------------

inline rumorcast::KernelParams random_kernel(rumorcast::KernelFamily family,
                                             std::mt19937_64& rng) {
    using rumorcast::KernelFamily;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (family) {
        case KernelFamily::Exponential:
            return rumorcast::KernelParams::exponential(0.05 + 4.0 * unif(rng));
        case KernelFamily::PowerLaw:
            return rumorcast::KernelParams::power_law(0.2 + 3.0 * unif(rng),
                                                      0.05 + 3.0 * unif(rng));
        case KernelFamily::Weibull:
            return rumorcast::KernelParams::weibull(0.1 + 3.0 * unif(rng),
                                                    0.2 + 0.8 * unif(rng));
    }
    throw std::logic_error("unreachable");
}

// Random valid cascade with a small schema: times sorted, random tree,
// random covariates. Structural covariates derived afterwards.
inline rumorcast::Cascade random_cascade(const rumorcast::CovariateSchema& schema,
                                         std::size_t n_events,
                                         std::mt19937_64& rng,
                                         double horizon = 48.0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    rumorcast::Cascade c;
    c.id = "rand-" + std::to_string(rng());
    c.horizon_hours = horizon;
    for (std::size_t k = 0; k < schema.cascade.size(); ++k)
        c.cascade_covariates.push_back(unif(rng));
    std::vector<double> times{0.0};
    for (std::size_t i = 1; i < n_events; ++i)
        times.push_back(unif(rng) * horizon * 0.9);
    std::sort(times.begin(), times.end());
    for (std::size_t i = 0; i < n_events; ++i) {
        rumorcast::Event e;
        e.time = times[i];
        e.parent = i == 0 ? -1
                          : static_cast<int>(rng() % i);
        for (std::size_t k = 0; k < schema.user.size(); ++k)
            e.user_covariates.push_back(std::abs(normal(rng)) * 10.0);
        c.events.push_back(std::move(e));
    }
    rumorcast::derive_structural(c, schema);
    return c;
}

inline rumorcast::CovariateSchema small_schema() {
    rumorcast::CovariateSchema s;
    s.cascade = {{"topic", false}};
    s.user = {{"engagement", true}};
    s.structural = {{"depth", true}, {"response_time", true}};
    return s;
}

}  // namespace testsupport
