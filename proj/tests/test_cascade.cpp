#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rumorcast/cascade.hpp"
#include "rumorcast/cascade_io.hpp"
#include "support/test_support.hpp"

using namespace rumorcast;

namespace {

const char* kThreeEventLine =
    R"({"id":"c1","label":"false","horizon_hours":2.0,)"
    R"("z":{"pos_emotion":0.3,"neg_emotion":0.5,"surprise":0.1,"topic_political":1},)"
    R"("events":[)"
    R"({"t":0.0,"parent":null,"x":{"followers":120,"followees":80,"account_age_days":400,"engagement":2.5}},)"
    R"({"t":0.5,"parent":0,"x":{"followers":10,"followees":20,"account_age_days":100,"engagement":1.0}},)"
    R"({"t":1.0,"parent":0,"x":{"followers":30,"followees":15,"account_age_days":200,"engagement":0.5}}]})";

Cascade make_chain(std::vector<double> times, double horizon) {
    Cascade c;
    c.id = "chain";
    c.horizon_hours = horizon;
    for (std::size_t i = 0; i < times.size(); ++i) {
        Event e;
        e.time = times[i];
        e.parent = i == 0 ? -1 : static_cast<int>(i) - 1;
        c.events.push_back(e);
    }
    return c;
}

}  // namespace

TEST(CascadeIngest, ParsesRecordAndDerivesDepth) {
    std::istringstream in(kThreeEventLine);
    auto cascades = ingest(in, CovariateSchema::default_twitter());
    ASSERT_EQ(cascades.size(), 1u);
    Cascade& c = cascades[0];
    EXPECT_EQ(c.size(), 3u);
    EXPECT_EQ(c.label, Veracity::False);
    derive_structural(c, CovariateSchema::default_twitter());
    const auto depth = event_depths(c);
    EXPECT_EQ(depth[0], 0);
    EXPECT_EQ(depth[1], 1);
    EXPECT_EQ(depth[2], 1);
}

TEST(CascadeIngest, ParentOutOfRangeFails) {
    std::string line = kThreeEventLine;
    const auto pos = line.find(R"("t":1.0,"parent":0)");
    ASSERT_NE(pos, std::string::npos);
    line.replace(pos, std::string(R"("t":1.0,"parent":0)").size(),
                 R"("t":1.0,"parent":5)");
    std::istringstream in(line);
    try {
        ingest(in, CovariateSchema::default_twitter());
        FAIL() << "expected a validation error";
    } catch (const ParseError& err) {
        EXPECT_NE(std::string(err.what()).find("parent out of range"),
                  std::string::npos);
    }
}

TEST(CascadeIngest, BadLineIsNamedAndNothingIsDroppedSilently) {
    std::ostringstream file;
    for (int i = 0; i < 10; ++i) {
        if (i == 6)
            file << "{this is not json}\n";
        else
            file << kThreeEventLine << "\n";
    }
    std::istringstream in(file.str());
    try {
        ingest(in, CovariateSchema::default_twitter());
        FAIL() << "expected a parse error";
    } catch (const ParseError& err) {
        EXPECT_NE(std::string(err.what()).find("line 7"), std::string::npos);
    }
}

TEST(CascadeIngest, EventsSortedStablyAndParentsRemapped) {
    // events listed out of order, including a tie at t = 0.5
    std::string line =
        R"({"id":"c2","label":null,"horizon_hours":null,)"
        R"("z":{"pos_emotion":0,"neg_emotion":0,"surprise":0,"topic_political":0},)"
        R"("events":[)"
        R"({"t":0.5,"parent":2,"x":{"followers":1,"followees":1,"account_age_days":1,"engagement":1}},)"
        R"({"t":0.5,"parent":2,"x":{"followers":2,"followees":2,"account_age_days":2,"engagement":2}},)"
        R"({"t":0.0,"parent":null,"x":{"followers":3,"followees":3,"account_age_days":3,"engagement":3}}]})";
    std::istringstream in(line);
    auto cascades = ingest(in, CovariateSchema::default_twitter());
    ASSERT_EQ(cascades.size(), 1u);
    const Cascade& c = cascades[0];
    EXPECT_DOUBLE_EQ(c.events[0].time, 0.0);
    EXPECT_EQ(c.events[0].parent, -1);
    // tie preserved in input order
    EXPECT_DOUBLE_EQ(c.events[1].user_covariates[0], 1.0);
    EXPECT_DOUBLE_EQ(c.events[2].user_covariates[0], 2.0);
    EXPECT_EQ(c.events[1].parent, 0);
    EXPECT_EQ(c.events[2].parent, 0);
    // absent horizon defaults to the last event time
    EXPECT_DOUBLE_EQ(c.horizon_hours, 0.5);
}

TEST(CascadeIngest, RoundTripIsIdentity) {
    std::istringstream in(kThreeEventLine);
    const auto schema = CovariateSchema::default_twitter();
    auto cascades = ingest(in, schema);
    std::ostringstream out1;
    serialize(out1, cascades, schema);
    std::istringstream in2(out1.str());
    auto again = ingest(in2, schema);
    std::ostringstream out2;
    serialize(out2, again, schema);
    EXPECT_EQ(out1.str(), out2.str());
    ASSERT_EQ(again.size(), cascades.size());
    EXPECT_EQ(again[0].events[1].time, cascades[0].events[1].time);
    EXPECT_EQ(again[0].horizon_hours, cascades[0].horizon_hours);
}

TEST(CascadePreprocess, MinSizeBoundary) {
    std::vector<Cascade> cascades;
    cascades.push_back(make_chain({0, 1, 2, 3, 4}, 10));      // 5 events
    cascades.push_back(make_chain({0, 1, 2, 3, 4, 5}, 10));   // 6 events
    auto kept = preprocess(std::move(cascades), 6);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].size(), 6u);

    EXPECT_TRUE(preprocess({}, 6).empty());
}

TEST(CascadePreprocess, LabelFilter) {
    std::vector<Cascade> cascades;
    cascades.push_back(make_chain({0, 1}, 10));
    cascades.push_back(make_chain({0, 1}, 10));
    cascades[1].label = Veracity::True;
    auto kept = preprocess(std::move(cascades), 1, /*require_label=*/true);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].label, Veracity::True);
}

TEST(DeriveStructural, ChainDepthsElapsedResponse) {
    Cascade c = make_chain({0.0, 1.0, 3.0}, 10.0);
    CovariateSchema schema;
    schema.structural = {{"depth", false},
                         {"response_time", false},
                         {"elapsed_time", false}};
    derive_structural(c, schema);
    EXPECT_DOUBLE_EQ(c.events[2].structural[0], 2.0);  // depth(b)
    EXPECT_DOUBLE_EQ(c.events[2].structural[1], 2.0);  // response(b)
    EXPECT_DOUBLE_EQ(c.events[2].structural[2], 3.0);  // elapsed(b)
    EXPECT_DOUBLE_EQ(c.events[0].structural[0], 0.0);
    EXPECT_DOUBLE_EQ(c.events[0].structural[1], 0.0);
    EXPECT_DOUBLE_EQ(c.events[0].structural[2], 0.0);
}

TEST(DeriveStructural, StarDepthsAndLogTransform) {
    Cascade c;
    c.id = "star";
    c.horizon_hours = 4.0;
    c.events.push_back({0.0, -1, {}, {}});
    for (int i = 1; i <= 4; ++i) c.events.push_back({double(i), 0, {}, {}});
    CovariateSchema schema;
    schema.structural = {{"depth", true}};
    derive_structural(c, schema);
    for (int i = 1; i <= 4; ++i)
        EXPECT_DOUBLE_EQ(c.events[i].structural[0], std::log1p(1.0));
}

TEST(DeriveStructural, InvariantsOnRandomCascades) {
    std::mt19937_64 rng(5);
    CovariateSchema schema;
    schema.structural = {{"depth", false},
                         {"response_time", false},
                         {"elapsed_time", false}};
    for (int rep = 0; rep < 30; ++rep) {
        Cascade c = testsupport::random_cascade(schema, 2 + rng() % 30, rng);
        derive_structural(c, schema);
        for (std::size_t i = 1; i < c.events.size(); ++i) {
            const Event& e = c.events[i];
            EXPECT_DOUBLE_EQ(e.structural[0],
                             c.events[e.parent].structural[0] + 1.0);
            EXPECT_DOUBLE_EQ(e.structural[2], e.time);
            EXPECT_GE(e.structural[1], 0.0);
        }
    }
}

TEST(Truncate, ByTime) {
    Cascade c = make_chain({0, 10, 20, 30}, 30.0);
    Cascade cut = truncate_time(c, 15.0);
    EXPECT_EQ(cut.size(), 2u);
    EXPECT_DOUBLE_EQ(cut.horizon_hours, 15.0);
}

TEST(Truncate, ByCount) {
    Cascade c = make_chain({0, 1, 2, 3, 4, 5, 6, 7, 8}, 20.0);  // 8 retweets
    Cascade cut = truncate_count(c, 5);
    EXPECT_EQ(cut.size(), 6u);  // root + 5 retweets
    EXPECT_DOUBLE_EQ(cut.horizon_hours, 5.0);
}

TEST(Truncate, AtOrBeyondHorizonIsIdentity) {
    Cascade c = make_chain({0, 10, 20, 30}, 35.0);
    Cascade cut = truncate_time(c, 35.0);
    EXPECT_EQ(cut.size(), 4u);
    EXPECT_DOUBLE_EQ(cut.horizon_hours, 35.0);
    Cascade cut2 = truncate_count(c, 10);
    EXPECT_EQ(cut2.size(), 4u);
    EXPECT_DOUBLE_EQ(cut2.horizon_hours, 35.0);
}

TEST(Truncate, CompositionTakesTheMinimum) {
    std::mt19937_64 rng(11);
    const auto schema = testsupport::small_schema();
    for (int rep = 0; rep < 20; ++rep) {
        Cascade c = testsupport::random_cascade(schema, 2 + rng() % 20, rng);
        const double t1 = 1.0 + (rng() % 40);
        const double t2 = 1.0 + (rng() % 40);
        Cascade a = truncate_time(truncate_time(c, t1), t2);
        Cascade b = truncate_time(c, std::min(t1, t2));
        EXPECT_EQ(a.size(), b.size());
        EXPECT_DOUBLE_EQ(a.horizon_hours, b.horizon_hours);
    }
}

TEST(Truncate, RejectsBadArguments) {
    Cascade c = make_chain({0, 1}, 2.0);
    EXPECT_THROW(truncate_time(c, 0.0), std::invalid_argument);
    EXPECT_THROW(truncate_count(c, 0), std::invalid_argument);
}

TEST(BalancedSample, SplitsAndDeterminism) {
    std::vector<Cascade> cascades;
    for (int i = 0; i < 100; ++i) {
        Cascade c = make_chain({0, 1}, 2.0);
        c.id = "f" + std::to_string(i);
        c.label = Veracity::False;
        cascades.push_back(c);
        c.id = "t" + std::to_string(i);
        c.label = Veracity::True;
        cascades.push_back(c);
    }
    auto [train, test] = balanced_sample(cascades, 50, 99);
    EXPECT_EQ(train.size(), 100u);
    EXPECT_EQ(test.size(), 100u);
    std::size_t train_false = 0;
    for (const auto& c : train)
        if (c.label == Veracity::False) ++train_false;
    EXPECT_EQ(train_false, 50u);

    auto [train2, test2] = balanced_sample(cascades, 50, 99);
    for (std::size_t i = 0; i < train.size(); ++i)
        EXPECT_EQ(train[i].id, train2[i].id);

    try {
        balanced_sample(cascades, 101, 1);
        FAIL() << "expected an error";
    } catch (const std::invalid_argument& err) {
        EXPECT_NE(std::string(err.what()).find("false=100"), std::string::npos);
    }
}

TEST(Validation, CatchesStructuralBreaks) {
    Cascade c = make_chain({0, 1, 2}, 5.0);
    EXPECT_NO_THROW(validate(c));
    Cascade bad = c;
    bad.events[2].parent = 2;
    EXPECT_THROW(validate(bad), CascadeValidationError);
    bad = c;
    bad.events[1].time = -0.5;
    EXPECT_THROW(validate(bad), CascadeValidationError);
    bad = c;
    bad.horizon_hours = 1.0;
    EXPECT_THROW(validate(bad), CascadeValidationError);
    bad = c;
    bad.events[0].time = 0.2;
    EXPECT_THROW(validate(bad), CascadeValidationError);
}

TEST(Standardizer, MeanZeroUnitVarianceAndConstantGuard) {
    const auto schema = testsupport::small_schema();
    std::mt19937_64 rng(3);
    std::vector<Cascade> cascades;
    for (int i = 0; i < 10; ++i)
        cascades.push_back(testsupport::random_cascade(schema, 12, rng));
    // make the z column constant across all cascades
    for (auto& c : cascades) c.cascade_covariates[0] = 0.7;
    const Standardizer s = fit_standardizer(cascades, schema);
    EXPECT_DOUBLE_EQ(s.stddev[0], 1.0);  // constant column guard

    // standardized rows have mean ~0, sd ~1 per non-constant column
    const std::size_t dim = schema.row_dim();
    std::vector<double> sum(dim, 0.0), sum2(dim, 0.0);
    std::size_t count = 0;
    std::vector<double> row(dim);
    for (const auto& c : cascades)
        for (std::size_t i = 0; i < c.size(); ++i) {
            covariate_row(c, i, schema, row);
            s.apply(row);
            ++count;
            for (std::size_t j = 0; j < dim; ++j) {
                sum[j] += row[j];
                sum2[j] += row[j] * row[j];
            }
        }
    for (std::size_t j = 1; j < dim; ++j) {
        const double mean = sum[j] / count;
        const double var = sum2[j] / (count - 1);
        EXPECT_NEAR(mean, 0.0, 1e-10);
        EXPECT_NEAR(var, 1.0, 0.05);
    }
}
