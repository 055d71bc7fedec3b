#include <gtest/gtest.h>

#include "wiener/generate.hpp"
#include "wiener/io.hpp"

using namespace wiener;

TEST(Io, KernelRoundTripIsByteStable)
{
    const Kernel k = generate_kernel(Group::heisenberg(), 2, 12, Profile::exponential(1.0, 2), 1);
    const std::string text = io::to_json(k).dump();
    const Kernel back = io::kernel_from_json(io::parse_text(text));
    EXPECT_EQ(max_entry_distance(k, back), 0.0);
    EXPECT_EQ(io::to_json(back).dump(), text);
}

TEST(Io, CovarianceAndEnvelopeRoundTrip)
{
    Rng rng(6);
    const CovarianceElement f = random_covariance(Group::cyclic(3), 2, rng);
    const CovarianceElement fb = io::covariance_from_json(io::parse_text(io::to_json(f).dump()));
    EXPECT_EQ(max_entry_distance(f, fb), 0.0);

    const Envelope beta = intended_envelope(Group::lattice(2), Profile::polynomial(1.5, 3));
    const Envelope bb = io::envelope_from_json(io::parse_text(io::to_json(beta).dump()));
    EXPECT_EQ(l1_distance(beta, bb), 0.0);
}

TEST(Io, KernelFormatExample)
{
    const auto j = io::parse_text(R"({"group": "Z", "dim": 1,
        "entries": [{"s": [1], "t": [0], "matrix": [[0.5, 0]]},
                    {"s": [1], "t": [0], "matrix": [[0.25, -1]]}]})");
    const Kernel k = io::kernel_from_json(j);
    EXPECT_EQ(k.size(), 1u);
    EXPECT_EQ(k.at({1}, {0})(0, 0), Complex(0.75, -1.0));
    EXPECT_EQ(io::to_json(k)["group"], "Z^1");
}

TEST(Io, MalformedInputsAreParseErrors)
{
    EXPECT_THROW(io::parse_text("{not json"), ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(R"({"dim": 1, "entries": []})")), ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(R"({"group": "Q", "dim": 1, "entries": []})")), ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(R"({"group": "Z", "dim": 0, "entries": []})")), ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(R"({"group": "Z", "dim": 1})")), ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(
                     R"({"group": "Z^2", "dim": 1, "entries": [{"s": [1], "t": [0, 0], "matrix": [[1, 0]]}]})")),
                 ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(
                     R"({"group": "Z", "dim": 2, "entries": [{"s": [1], "t": [0], "matrix": [[1, 0]]}]})")),
                 ParseError);
    EXPECT_THROW(io::kernel_from_json(io::parse_text(
                     R"({"group": "Z", "dim": 1, "entries": [{"s": [1.5], "t": [0], "matrix": [[1, 0]]}]})")),
                 ParseError);
    EXPECT_THROW(io::envelope_from_json(io::parse_text(R"({"group": "Z", "values": [{"s": [0], "value": -1}]})")),
                 ParseError);
    EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), ParseError);
}

TEST(Io, DecayReportFormats)
{
    const Group z = Group::lattice(1);
    InversionConfig cfg;
    cfg.radii = {4, 6};
    const SectionInverse r = finite_section_inverse(translation_kernel(z, 1, {1}, 0.5, z.ball(7)), cfg);
    const std::string csv = io::decay_csv(r.report);
    EXPECT_EQ(csv.rfind("radius,word_length,envelope_value\n4,0,1\n4,1,0.5\n4,2,0.25\n", 0), 0u);
    EXPECT_NE(csv.find("\n6,3,0.125\n"), std::string::npos);

    const auto summary = io::decay_summary(r.report);
    EXPECT_TRUE(summary["stabilized"].get<bool>());
    // Shifts up to 6 fit in the inner window [-3, 3]; its radius is too small for a fit, so the rate is null.
    EXPECT_TRUE(summary["fitted_rate"].is_null());
    EXPECT_EQ(summary["l1_partial_sums"].size(), 7u);
    EXPECT_DOUBLE_EQ(summary["l1_partial_sums"][6].get<double>(), 1.984375);
}
