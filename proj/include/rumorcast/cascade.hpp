#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rumorcast/rng.hpp"

namespace rumorcast {

enum class Veracity { True, False };

inline std::string veracity_name(Veracity v) {
    return v == Veracity::False ? "false" : "true";
}

// One (re)tweet. The root sits at index 0 with time 0 and no parent; every
// other event points at an earlier event.
struct Event {
    double time{0.0};  // hours since the source tweet
    int parent{-1};    // index of the parent event, -1 for the root
    std::vector<double> user_covariates;  // x, raw values as ingested
    std::vector<double> structural;       // y, filled by derive_structural
};

struct Cascade {
    std::string id;
    std::vector<Event> events;
    std::vector<double> cascade_covariates;  // z
    std::optional<Veracity> label;
    double horizon_hours{0.0};  // observation end T

    std::size_t size() const { return events.size(); }
    std::size_t retweet_count() const { return events.size() - 1; }
};

struct CovariateSpec {
    std::string name;
    bool log1p{false};  // enter the mark row as log(1 + v)
};

// Names and transforms of the three covariate blocks (z, x, y).
struct CovariateSchema {
    std::vector<CovariateSpec> cascade;     // z
    std::vector<CovariateSpec> user;        // x
    std::vector<CovariateSpec> structural;  // y, derived from the tree

    std::size_t row_dim() const {
        return cascade.size() + user.size() + structural.size();
    }

    // Schema for the Twitter covariates: emotions + topic at cascade level,
    // social-influence variables per user, tree-derived structure per event.
    static CovariateSchema default_twitter() {
        CovariateSchema s;
        s.cascade = {{"pos_emotion", false},
                     {"neg_emotion", false},
                     {"surprise", false},
                     {"topic_political", false}};
        s.user = {{"followers", true},
                  {"followees", true},
                  {"account_age_days", true},
                  {"engagement", true}};
        s.structural = {{"depth", true},
                        {"response_time", true},
                        {"elapsed_time", true}};
        return s;
    }

    void validate() const {
        std::unordered_set<std::string> seen;
        auto check = [&seen](const std::vector<CovariateSpec>& block) {
            for (const auto& spec : block) {
                if (spec.name.empty())
                    throw std::invalid_argument("schema covariate name empty");
                if (!seen.insert(spec.name).second)
                    throw std::invalid_argument("duplicate covariate name: " +
                                                spec.name);
            }
        };
        check(cascade);
        check(user);
        check(structural);
        for (const auto& spec : structural) {
            if (spec.name != "depth" && spec.name != "response_time" &&
                spec.name != "elapsed_time")
                throw std::invalid_argument(
                    "unknown structural covariate: " + spec.name);
        }
    }
};

class CascadeValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Structural invariants: one root at index 0 with time 0, nondecreasing
// times, parents strictly earlier, horizon covering the last event.
inline void validate(const Cascade& c) {
    auto fail = [&c](const std::string& what) {
        throw CascadeValidationError("cascade '" + c.id + "': " + what);
    };
    if (c.events.empty()) fail("no events");
    if (c.events[0].parent != -1) fail("event 0 is not a root");
    if (c.events[0].time != 0.0) fail("root time must be 0");
    for (std::size_t i = 1; i < c.events.size(); ++i) {
        const Event& e = c.events[i];
        if (e.parent < 0) fail("multiple roots (event " + std::to_string(i) + ")");
        if (e.parent >= static_cast<int>(i))
            fail("parent out of range at event " + std::to_string(i));
        if (e.time < c.events[i - 1].time)
            fail("times not nondecreasing at event " + std::to_string(i));
        if (e.time < c.events[e.parent].time)
            fail("event " + std::to_string(i) + " precedes its parent");
        if (e.user_covariates.size() != c.events[0].user_covariates.size())
            fail("ragged user covariates at event " + std::to_string(i));
    }
    if (c.horizon_hours < c.events.back().time)
        fail("horizon precedes the last event");
}

// Tree depth (edge count from the root) per event.
inline std::vector<int> event_depths(const Cascade& c) {
    std::vector<int> depth(c.events.size(), 0);
    for (std::size_t i = 1; i < c.events.size(); ++i)
        depth[i] = depth[c.events[i].parent] + 1;
    return depth;
}

// Fills y for every event: depth, elapsed time since the root, and response
// time to the parent, transformed as log(1 + v) where the schema says so.
inline void derive_structural(Cascade& c, const CovariateSchema& schema) {
    const std::vector<int> depth = event_depths(c);
    for (std::size_t i = 0; i < c.events.size(); ++i) {
        Event& e = c.events[i];
        e.structural.resize(schema.structural.size());
        for (std::size_t j = 0; j < schema.structural.size(); ++j) {
            const CovariateSpec& spec = schema.structural[j];
            double v = 0.0;
            if (spec.name == "depth") {
                v = static_cast<double>(depth[i]);
            } else if (spec.name == "elapsed_time") {
                v = e.time;
            } else if (spec.name == "response_time") {
                v = e.parent >= 0 ? e.time - c.events[e.parent].time : 0.0;
            } else {
                throw std::invalid_argument("unknown structural covariate: " +
                                            spec.name);
            }
            e.structural[j] = spec.log1p ? std::log1p(v) : v;
        }
    }
}

// Drops cascades below min_size (and unlabeled ones when labels are needed
// downstream). Pure filter, never throws.
inline std::vector<Cascade> preprocess(std::vector<Cascade> cascades,
                                       std::size_t min_size,
                                       bool require_label = false) {
    if (min_size < 1) throw std::invalid_argument("min_size must be >= 1");
    std::vector<Cascade> kept;
    kept.reserve(cascades.size());
    for (auto& c : cascades) {
        if (c.size() < min_size) continue;
        if (require_label && !c.label.has_value()) continue;
        kept.push_back(std::move(c));
    }
    return kept;
}

// Keeps the root plus events with t <= t_max and shrinks the horizon to
// t_max. A cut at or past the horizon returns the cascade unchanged.
inline Cascade truncate_time(const Cascade& c, double t_max) {
    if (!(t_max > 0.0)) throw std::invalid_argument("truncation time must be > 0");
    if (t_max >= c.horizon_hours) return c;
    Cascade out;
    out.id = c.id;
    out.cascade_covariates = c.cascade_covariates;
    out.label = c.label;
    out.horizon_hours = t_max;
    for (const Event& e : c.events) {
        if (e.time > t_max) break;  // events are time-sorted
        out.events.push_back(e);
    }
    return out;
}

// Keeps the root plus the first n retweets; the horizon becomes the time of
// the last kept event, so the compensator integrates only over what was
// observable at that point.
inline Cascade truncate_count(const Cascade& c, std::size_t n_retweets) {
    if (n_retweets < 1) throw std::invalid_argument("truncation count must be >= 1");
    if (c.retweet_count() <= n_retweets) return c;
    Cascade out;
    out.id = c.id;
    out.cascade_covariates = c.cascade_covariates;
    out.label = c.label;
    out.events.assign(c.events.begin(), c.events.begin() + n_retweets + 1);
    out.horizon_hours = out.events.back().time;
    return out;
}

// Draws per_class cascades of each veracity for training; the remainder is
// the test set. Deterministic under a fixed seed.
inline std::pair<std::vector<Cascade>, std::vector<Cascade>> balanced_sample(
    const std::vector<Cascade>& cascades, std::size_t per_class,
    std::uint64_t seed) {
    std::vector<std::size_t> idx_false, idx_true;
    for (std::size_t i = 0; i < cascades.size(); ++i) {
        if (!cascades[i].label.has_value()) continue;
        (*cascades[i].label == Veracity::False ? idx_false : idx_true)
            .push_back(i);
    }
    if (idx_false.size() < per_class || idx_true.size() < per_class)
        throw std::invalid_argument(
            "balanced_sample: need " + std::to_string(per_class) +
            " per class, have false=" + std::to_string(idx_false.size()) +
            " true=" + std::to_string(idx_true.size()));

    std::vector<bool> in_train(cascades.size(), false);
    std::vector<Cascade> train;
    train.reserve(2 * per_class);
    std::uint64_t stream = 0;
    for (auto* idx : {&idx_false, &idx_true}) {
        auto rng = make_rng(seed, stream++);
        std::shuffle(idx->begin(), idx->end(), rng);
        for (std::size_t j = 0; j < per_class; ++j) {
            train.push_back(cascades[(*idx)[j]]);
            in_train[(*idx)[j]] = true;
        }
    }
    std::vector<Cascade> test;
    test.reserve(cascades.size() - train.size());
    for (std::size_t i = 0; i < cascades.size(); ++i)
        if (!in_train[i]) test.push_back(cascades[i]);
    return {std::move(train), std::move(test)};
}

// --- mark covariate rows ------------------------------------------------

// Zero-mean unit-variance transform over the training events, stored with
// the fit so scoring uses the same scale.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    static Standardizer identity(std::size_t dim) {
        Standardizer s;
        s.mean.assign(dim, 0.0);
        s.stddev.assign(dim, 1.0);
        return s;
    }

    void apply(std::span<double> row) const {
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = (row[j] - mean[j]) / stddev[j];
    }
};

// Raw (z, x, y) row for one event: schema log1p flags are applied to z and
// x here; y comes pre-transformed from derive_structural.
inline void covariate_row(const Cascade& c, std::size_t event_index,
                          const CovariateSchema& schema,
                          std::span<double> out) {
    const Event& e = c.events[event_index];
    if (c.cascade_covariates.size() != schema.cascade.size() ||
        e.user_covariates.size() != schema.user.size() ||
        e.structural.size() != schema.structural.size())
        throw std::invalid_argument("cascade '" + c.id +
                                    "' does not match the covariate schema");
    std::size_t j = 0;
    for (std::size_t k = 0; k < schema.cascade.size(); ++k, ++j)
        out[j] = schema.cascade[k].log1p ? std::log1p(c.cascade_covariates[k])
                                         : c.cascade_covariates[k];
    for (std::size_t k = 0; k < schema.user.size(); ++k, ++j)
        out[j] = schema.user[k].log1p ? std::log1p(e.user_covariates[k])
                                      : e.user_covariates[k];
    for (std::size_t k = 0; k < schema.structural.size(); ++k, ++j)
        out[j] = e.structural[k];
    for (double v : out)
        if (!std::isfinite(v))
            throw std::domain_error("cascade '" + c.id +
                                    "': non-finite covariate value");
}

// Fit a standardizer over every event row of the training cascades.
// Constant columns keep stddev 1 so the transform stays total.
inline Standardizer fit_standardizer(std::span<const Cascade> cascades,
                                     const CovariateSchema& schema) {
    const std::size_t dim = schema.row_dim();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.stddev.assign(dim, 0.0);
    std::size_t count = 0;
    std::vector<double> row(dim);
    for (const Cascade& c : cascades) {
        for (std::size_t i = 0; i < c.events.size(); ++i) {
            covariate_row(c, i, schema, row);
            ++count;
            for (std::size_t j = 0; j < dim; ++j) {
                const double delta = row[j] - s.mean[j];
                s.mean[j] += delta / static_cast<double>(count);
                s.stddev[j] += delta * (row[j] - s.mean[j]);
            }
        }
    }
    if (count == 0) throw std::invalid_argument("no events to standardize");
    for (std::size_t j = 0; j < dim; ++j) {
        const double var = count > 1 ? s.stddev[j] / static_cast<double>(count - 1) : 0.0;
        s.stddev[j] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
    return s;
}

}  // namespace rumorcast
