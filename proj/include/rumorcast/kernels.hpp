#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace rumorcast {

// Baseline memory kernels phi0: normalized decay densities on [0, inf) with
// closed-form integrals Phi0. Normalization makes an event's mark equal its
// expected number of direct offspring, so simulator and likelihood agree.
enum class KernelFamily { Exponential, PowerLaw, Weibull };

constexpr std::size_t kernel_arity(KernelFamily f) {
    return f == KernelFamily::Exponential ? 1 : 2;
}

inline std::string kernel_family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Exponential: return "exponential";
        case KernelFamily::PowerLaw: return "power_law";
        case KernelFamily::Weibull: return "weibull";
    }
    throw std::logic_error("unknown kernel family");
}

inline KernelFamily kernel_family_from_name(const std::string& name) {
    if (name == "exponential") return KernelFamily::Exponential;
    if (name == "power_law") return KernelFamily::PowerLaw;
    if (name == "weibull") return KernelFamily::Weibull;
    throw std::invalid_argument("unknown kernel family: " + name);
}

// Parameter slots by family:
//   Exponential: {rate}            rate > 0
//   PowerLaw:    {shape, offset}   Lomax density, both > 0
//   Weibull:     {scale, shape}    scale > 0, shape in (0, 1]
struct KernelParams {
    KernelFamily family{KernelFamily::Exponential};
    std::array<double, 2> params{1.0, 0.0};

    static KernelParams exponential(double rate) {
        KernelParams k{KernelFamily::Exponential, {rate, 0.0}};
        k.validate();
        return k;
    }
    static KernelParams power_law(double shape, double offset) {
        KernelParams k{KernelFamily::PowerLaw, {shape, offset}};
        k.validate();
        return k;
    }
    static KernelParams weibull(double scale, double shape) {
        KernelParams k{KernelFamily::Weibull, {scale, shape}};
        k.validate();
        return k;
    }

    void validate() const {
        const char* ctx = "kernel parameters must be strictly positive";
        switch (family) {
            case KernelFamily::Exponential:
                if (!(params[0] > 0.0)) throw std::invalid_argument(ctx);
                break;
            case KernelFamily::PowerLaw:
                if (!(params[0] > 0.0) || !(params[1] > 0.0))
                    throw std::invalid_argument(ctx);
                break;
            case KernelFamily::Weibull:
                if (!(params[0] > 0.0) || !(params[1] > 0.0))
                    throw std::invalid_argument(ctx);
                if (params[1] > 1.0)
                    throw std::invalid_argument(
                        "weibull shape must lie in (0, 1]");
                break;
        }
    }

    // True when the density is unbounded as s -> 0 (needs the lag clamp).
    bool diverges_at_zero() const {
        return family == KernelFamily::Weibull && params[1] < 1.0;
    }
};

struct KernelPair {
    KernelParams root;      // governs offspring of the source tweet
    KernelParams non_root;  // governs offspring of every retweet
};

namespace detail {
inline void check_lag(double s) {
    if (s < 0.0) throw std::domain_error("kernel lag must be nonnegative");
}
inline double inv_logit(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                    : std::exp(x) / (1.0 + std::exp(x));
}
inline double logit(double p) { return std::log(p) - std::log1p(-p); }
}  // namespace detail

// phi0(s)
inline double kernel_density(const KernelParams& k, double s) {
    detail::check_lag(s);
    switch (k.family) {
        case KernelFamily::Exponential: {
            const double rate = k.params[0];
            return rate * std::exp(-rate * s);
        }
        case KernelFamily::PowerLaw: {
            const double shape = k.params[0], offset = k.params[1];
            return shape / offset * std::pow(offset / (s + offset), shape + 1.0);
        }
        case KernelFamily::Weibull: {
            const double scale = k.params[0], shape = k.params[1];
            const double q = s / scale;
            if (s == 0.0)
                return shape < 1.0 ? std::numeric_limits<double>::infinity()
                                   : shape / scale;
            return shape / scale * std::pow(q, shape - 1.0) *
                   std::exp(-std::pow(q, shape));
        }
    }
    throw std::logic_error("unknown kernel family");
}

// log phi0(s); s must be positive for kernels that diverge at zero.
inline double kernel_log_density(const KernelParams& k, double s) {
    detail::check_lag(s);
    switch (k.family) {
        case KernelFamily::Exponential: {
            const double rate = k.params[0];
            return std::log(rate) - rate * s;
        }
        case KernelFamily::PowerLaw: {
            const double shape = k.params[0], offset = k.params[1];
            return std::log(shape) + shape * std::log(offset) -
                   (shape + 1.0) * std::log(s + offset);
        }
        case KernelFamily::Weibull: {
            const double scale = k.params[0], shape = k.params[1];
            const double log_q = std::log(s) - std::log(scale);
            return std::log(shape) - std::log(scale) +
                   (shape - 1.0) * log_q - std::exp(shape * log_q);
        }
    }
    throw std::logic_error("unknown kernel family");
}

// Phi0(s) = integral of phi0 over [0, s]; lies in [0, 1].
inline double kernel_integral(const KernelParams& k, double s) {
    detail::check_lag(s);
    switch (k.family) {
        case KernelFamily::Exponential:
            return -std::expm1(-k.params[0] * s);
        case KernelFamily::PowerLaw: {
            const double shape = k.params[0], offset = k.params[1];
            return -std::expm1(shape * std::log(offset / (s + offset)));
        }
        case KernelFamily::Weibull: {
            const double scale = k.params[0], shape = k.params[1];
            if (s == 0.0) return 0.0;
            return -std::expm1(-std::pow(s / scale, shape));
        }
    }
    throw std::logic_error("unknown kernel family");
}

// Phi0^{-1}(p) for p in [0, 1); used to sample truncated lags by inversion.
inline double kernel_integral_inverse(const KernelParams& k, double p) {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("kernel integral inverse needs p in [0, 1)");
    switch (k.family) {
        case KernelFamily::Exponential:
            return -std::log1p(-p) / k.params[0];
        case KernelFamily::PowerLaw: {
            const double shape = k.params[0], offset = k.params[1];
            return offset * std::expm1(-std::log1p(-p) / shape);
        }
        case KernelFamily::Weibull: {
            const double scale = k.params[0], shape = k.params[1];
            return scale * std::pow(-std::log1p(-p), 1.0 / shape);
        }
    }
    throw std::logic_error("unknown kernel family");
}

// --- unconstrained parameterization -----------------------------------
//
// Positive parameters map through exp; the Weibull shape maps through the
// inverse logit so it stays in (0, 1). Estimation runs on the raw scale.

inline KernelParams kernel_from_raw(KernelFamily f, std::span<const double> raw) {
    if (raw.size() < kernel_arity(f))
        throw std::invalid_argument("raw vector shorter than kernel arity");
    KernelParams k;
    k.family = f;
    switch (f) {
        case KernelFamily::Exponential:
            k.params = {std::exp(raw[0]), 0.0};
            break;
        case KernelFamily::PowerLaw:
            k.params = {std::exp(raw[0]), std::exp(raw[1])};
            break;
        case KernelFamily::Weibull:
            k.params = {std::exp(raw[0]), detail::inv_logit(raw[1])};
            break;
    }
    return k;
}

inline void kernel_to_raw(const KernelParams& k, std::span<double> raw) {
    if (raw.size() < kernel_arity(k.family))
        throw std::invalid_argument("raw span shorter than kernel arity");
    switch (k.family) {
        case KernelFamily::Exponential:
            raw[0] = std::log(k.params[0]);
            break;
        case KernelFamily::PowerLaw:
            raw[0] = std::log(k.params[0]);
            raw[1] = std::log(k.params[1]);
            break;
        case KernelFamily::Weibull:
            raw[0] = std::log(k.params[0]);
            raw[1] = detail::logit(k.params[1]);
            break;
    }
}

// d log phi0(s) / d raw_j, written into out[0..arity).
inline void kernel_log_density_grad_raw(const KernelParams& k, double s,
                                        std::span<double> out) {
    detail::check_lag(s);
    switch (k.family) {
        case KernelFamily::Exponential: {
            out[0] = 1.0 - k.params[0] * s;
            return;
        }
        case KernelFamily::PowerLaw: {
            const double shape = k.params[0], offset = k.params[1];
            out[0] = 1.0 + shape * std::log(offset / (s + offset));
            out[1] = shape - (shape + 1.0) * offset / (s + offset);
            return;
        }
        case KernelFamily::Weibull: {
            const double scale = k.params[0], shape = k.params[1];
            const double log_q = std::log(s) - std::log(scale);
            const double qk = std::exp(shape * log_q);
            out[0] = shape * (qk - 1.0);
            out[1] = (1.0 - shape) * (1.0 + shape * log_q * (1.0 - qk));
            return;
        }
    }
    throw std::logic_error("unknown kernel family");
}

// d Phi0(s) / d raw_j, written into out[0..arity).
inline void kernel_integral_grad_raw(const KernelParams& k, double s,
                                     std::span<double> out) {
    detail::check_lag(s);
    if (s == 0.0) {
        for (std::size_t j = 0; j < kernel_arity(k.family); ++j) out[j] = 0.0;
        return;
    }
    switch (k.family) {
        case KernelFamily::Exponential: {
            const double rate = k.params[0];
            out[0] = rate * s * std::exp(-rate * s);
            return;
        }
        case KernelFamily::PowerLaw: {
            const double shape = k.params[0], offset = k.params[1];
            const double u = offset / (s + offset);
            const double u_pow = std::pow(u, shape);
            out[0] = -shape * u_pow * std::log(u);
            out[1] = -shape * offset * s * std::pow(u, shape - 1.0) /
                     ((s + offset) * (s + offset));
            return;
        }
        case KernelFamily::Weibull: {
            const double scale = k.params[0], shape = k.params[1];
            const double log_q = std::log(s) - std::log(scale);
            const double qk = std::exp(shape * log_q);
            const double surv = std::exp(-qk);
            out[0] = -shape * qk * surv;
            out[1] = shape * (1.0 - shape) * qk * log_q * surv;
            return;
        }
    }
    throw std::logic_error("unknown kernel family");
}

}  // namespace rumorcast
