#pragma once

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rumorcast/cascade.hpp"

namespace rumorcast {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double covariate_field(const nlohmann::json& obj,
                              const CovariateSpec& spec,
                              const std::string& ctx) {
    auto it = obj.find(spec.name);
    if (it == obj.end() || !it->is_number())
        throw ParseError(ctx + ": missing numeric field '" + spec.name + "'");
    return it->get<double>();
}

}  // namespace detail

// Parses one cascade record. Events arrive in file order, get stably sorted
// by time, and parent indices are remapped to the sorted order.
inline Cascade cascade_from_json(const nlohmann::json& rec,
                                 const CovariateSchema& schema) {
    Cascade c;
    if (!rec.contains("id") || !rec["id"].is_string())
        throw ParseError("record: missing string field 'id'");
    c.id = rec["id"].get<std::string>();
    const std::string ctx = "cascade '" + c.id + "'";

    if (rec.contains("label") && !rec["label"].is_null()) {
        const std::string label = rec["label"].get<std::string>();
        if (label == "true")
            c.label = Veracity::True;
        else if (label == "false")
            c.label = Veracity::False;
        else
            throw ParseError(ctx + ": label must be \"true\", \"false\" or null");
    }

    if (!rec.contains("z") || !rec["z"].is_object())
        throw ParseError(ctx + ": missing object field 'z'");
    for (const auto& spec : schema.cascade)
        c.cascade_covariates.push_back(
            detail::covariate_field(rec["z"], spec, ctx));

    if (!rec.contains("events") || !rec["events"].is_array() ||
        rec["events"].empty())
        throw ParseError(ctx + ": missing nonempty array field 'events'");

    for (const auto& ev : rec["events"]) {
        Event e;
        if (!ev.contains("t") || !ev["t"].is_number())
            throw ParseError(ctx + ": event missing numeric field 't'");
        e.time = ev["t"].get<double>();
        if (!ev.contains("parent"))
            throw ParseError(ctx + ": event missing field 'parent'");
        e.parent = ev["parent"].is_null() ? -1 : ev["parent"].get<int>();
        if (!ev.contains("x") || !ev["x"].is_object())
            throw ParseError(ctx + ": event missing object field 'x'");
        for (const auto& spec : schema.user)
            e.user_covariates.push_back(
                detail::covariate_field(ev["x"], spec, ctx));
        c.events.push_back(std::move(e));
    }

    // stable sort by time, remap parents to the new order
    std::vector<std::size_t> order(c.events.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&c](std::size_t a, std::size_t b) {
                         return c.events[a].time < c.events[b].time;
                     });
    std::vector<int> new_index(c.events.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        new_index[order[pos]] = static_cast<int>(pos);
    std::vector<Event> sorted;
    sorted.reserve(c.events.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        Event e = std::move(c.events[order[pos]]);
        if (e.parent >= 0) {
            if (e.parent >= static_cast<int>(new_index.size()))
                throw CascadeValidationError("cascade '" + c.id +
                                             "': parent out of range");
            e.parent = new_index[e.parent];
        }
        sorted.push_back(std::move(e));
    }
    c.events = std::move(sorted);

    if (rec.contains("horizon_hours") && !rec["horizon_hours"].is_null())
        c.horizon_hours = rec["horizon_hours"].get<double>();
    else
        c.horizon_hours = c.events.back().time;

    validate(c);
    return c;
}

inline nlohmann::json cascade_to_json(const Cascade& c,
                                      const CovariateSchema& schema) {
    nlohmann::json rec;
    rec["id"] = c.id;
    rec["label"] = c.label.has_value()
                       ? nlohmann::json(veracity_name(*c.label))
                       : nlohmann::json(nullptr);
    rec["horizon_hours"] = c.horizon_hours;
    nlohmann::json z;
    for (std::size_t k = 0; k < schema.cascade.size(); ++k)
        z[schema.cascade[k].name] = c.cascade_covariates[k];
    rec["z"] = std::move(z);
    nlohmann::json events = nlohmann::json::array();
    for (const Event& e : c.events) {
        nlohmann::json ev;
        ev["t"] = e.time;
        ev["parent"] =
            e.parent < 0 ? nlohmann::json(nullptr) : nlohmann::json(e.parent);
        nlohmann::json x;
        for (std::size_t k = 0; k < schema.user.size(); ++k)
            x[schema.user[k].name] = e.user_covariates[k];
        ev["x"] = std::move(x);
        events.push_back(std::move(ev));
    }
    rec["events"] = std::move(events);
    return rec;
}

// Reads a JSONL stream, one cascade per line. Any bad line aborts the whole
// read with its line number; there is no silent partial drop.
inline std::vector<Cascade> ingest(std::istream& in,
                                   const CovariateSchema& schema) {
    std::vector<Cascade> cascades;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& err) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": invalid JSON: " + err.what());
        }
        try {
            cascades.push_back(cascade_from_json(rec, schema));
        } catch (const std::exception& err) {
            throw ParseError("line " + std::to_string(line_no) + ": " +
                             err.what());
        }
    }
    return cascades;
}

inline void serialize(std::ostream& out, std::span<const Cascade> cascades,
                      const CovariateSchema& schema) {
    for (const Cascade& c : cascades)
        out << cascade_to_json(c, schema).dump() << '\n';
}

}  // namespace rumorcast
