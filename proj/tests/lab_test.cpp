#include <gtest/gtest.h>

#include <cmath>

#include "wiener/generate.hpp"
#include "wiener/lab.hpp"

using namespace wiener;

namespace {

Kernel shift_example(int window) { return translation_kernel(Group::lattice(1), 1, {1}, 0.5, Group::lattice(1).ball(window)); }

// 2 + 0.5 S + 0.3 S^-1 on Z/8 with 2x2 identity coefficients.
Kernel ring_example()
{
    const Group g = Group::cyclic(8);
    Kernel a = 2.0 * identity_kernel(g, 2, g.elements());
    a += translation_kernel(g, 2, {1}, 0.5, g.elements());
    a += translation_kernel(g, 2, {7}, 0.3, g.elements());
    return a;
}

} // namespace

TEST(Lab, ConfigValidation)
{
    InversionConfig cfg;
    cfg.radii = {};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.radii = {5, 5};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.radii = {5, 10};
    cfg.inner_ratio = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.inner_ratio = 0.5;
    cfg.stabilization_tol = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Lab, ShiftExampleInverseCoefficients)
{
    InversionConfig cfg;
    cfg.radii = {10, 16};
    const SectionInverse r = finite_section_inverse(shift_example(17), cfg);
    EXPECT_EQ(r.inverse.scalar, Complex(1.0));
    EXPECT_TRUE(r.report.stabilized);
    EXPECT_EQ(r.report.inner_radius, 8);
    // (1 + 0.5 S)^-1 = sum_n (-0.5)^n S^n; the identity term is carried by the scalar.
    for (int n = 1; n <= 16; ++n) EXPECT_NEAR(std::abs(r.inverse.kernel.at({n - 8}, {-8})(0, 0) - std::pow(-0.5, n)), 0.0, 1e-15);
    EXPECT_LE(r.report.residual, 1e-14);
    EXPECT_NEAR(r.report.fitted_rate, std::log(0.5), 1e-12);
    EXPECT_NEAR(r.report.r2, 1.0, 1e-12);
}

TEST(Lab, ZeroShiftGivesWholeInverse)
{
    InversionConfig cfg;
    cfg.z = 0.0;
    cfg.radii = {4};
    const Kernel a = ring_example();
    const SectionInverse r = finite_section_inverse(a, cfg);
    EXPECT_EQ(r.inverse.scalar, Complex(0.0));
    EXPECT_TRUE(r.report.stabilized);
    const Group& g = a.group();
    const auto all = g.elements();
    const Eigen::MatrixXcd dense = section_matrix(a, all).inverse();
    EXPECT_LE((section_matrix(r.inverse.kernel, all) - dense).norm(), 1e-13);
    EXPECT_LE(r.report.residual, 1e-14);
}

TEST(Lab, FiniteGroupMatchesDenseInverseWithScalar)
{
    InversionConfig cfg;
    cfg.z = Complex(0.0, 3.0);
    cfg.radii = {4};
    const Kernel a = ring_example();
    const SectionInverse r = finite_section_inverse(a, cfg);
    const auto all = a.group().elements();
    Eigen::MatrixXcd m = section_matrix(a, all);
    m.diagonal().array() += cfg.z;
    Eigen::MatrixXcd expected = m.inverse();
    expected.diagonal().array() -= 1.0 / cfg.z;
    EXPECT_LE((section_matrix(r.inverse.kernel, all) - expected).norm(), 1e-13);
    EXPECT_EQ(r.inverse.scalar, 1.0 / cfg.z);
}

TEST(Lab, SingularSectionIsReported)
{
    const Group g = Group::cyclic(4);
    const Kernel minus_one = -1.0 * identity_kernel(g, 1, g.elements());
    InversionConfig cfg;
    cfg.radii = {2};
    try {
        finite_section_inverse(minus_one, cfg);
        FAIL() << "expected NotInvertibleAtScale";
    } catch (const NotInvertibleAtScale& e) {
        EXPECT_EQ(e.radius, 2);
    }
    cfg.z = 1.5;
    cfg.condition_cap = 2.0;
    // Condition number of 0.5 I is 1, so the cap is respected without failure.
    EXPECT_NO_THROW(finite_section_inverse(minus_one, cfg));
}

TEST(Lab, FitRequiresStabilizedReportWithEnoughBuckets)
{
    DecayReport rep;
    EXPECT_THROW(fit_decay(rep), std::invalid_argument);
    InversionConfig cfg;
    cfg.radii = {4, 6};
    const SectionInverse r = finite_section_inverse(shift_example(7), cfg);
    ASSERT_TRUE(r.report.stabilized);
    // Inner radius 3 leaves word lengths 0..3 only.
    EXPECT_THROW(fit_decay(r.report), std::invalid_argument);
    EXPECT_TRUE(std::isnan(r.report.fitted_rate));
}

TEST(Lab, PartialSumsAreMonotone)
{
    const Group g = Group::lattice(2);
    const Kernel k = generate_kernel(g, 1, 3, Profile::exponential(2.0, 2), 12);
    InversionConfig cfg;
    cfg.z = 2.0 * envelope_norm(k);
    cfg.radii = {8, 10};
    const SectionInverse r = finite_section_inverse(k, cfg);
    const auto& s = r.report.l1_partial_sums;
    ASSERT_FALSE(s.empty());
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i], s[i - 1]);
    EXPECT_NEAR(s.back(), r.report.envelope_by_radius.at(10).l1_norm(), 1e-12);
}

TEST(Lab, NeumannShiftExample)
{
    const NeumannInverse n = neumann_inverse(shift_example(30), 1.0, 20);
    EXPECT_DOUBLE_EQ(n.ratio, 0.5);
    EXPECT_DOUBLE_EQ(n.error_bound, std::pow(0.5, 21) / 0.5);
    for (int p = 1; p <= 20; ++p) EXPECT_NEAR(std::abs(n.inverse.kernel.at({p}, {0})(0, 0) - std::pow(-0.5, p)), 0.0, 1e-15);
    // Doubling the number of terms squares the geometric tail factor.
    const NeumannInverse n40 = neumann_inverse(shift_example(30), 1.0, 40);
    EXPECT_NEAR(n40.error_bound * (1 - n.ratio) / std::abs(n40.inverse.scalar),
                std::pow(n.error_bound * (1 - n.ratio) / std::abs(n.inverse.scalar), 41.0 / 21.0), 1e-20);
}

TEST(Lab, NeumannRefusesOutsideConvergence)
{
    const Kernel k = shift_example(3);
    EXPECT_THROW(neumann_inverse(k, 0.5, 10), std::domain_error);
    EXPECT_THROW(neumann_inverse(k, 0.4, 10), std::domain_error);
    EXPECT_THROW(neumann_inverse(k, 0.0, 10), std::domain_error);
    EXPECT_THROW(neumann_inverse(k, 1.0, 0), std::invalid_argument);
}

TEST(Lab, WindowedNeumannMatchesFullSeries)
{
    const Group g = Group::lattice(1);
    const Kernel k = generate_kernel(g, 2, 9, Profile::banded(2), 30);
    const Complex z = 4.0 * envelope_norm(k);
    const NeumannInverse full = neumann_inverse(k, z, 8);
    const NeumannInverse local = neumann_inverse(k, z, 8, 5);
    const auto ball = g.ball(5);
    const Kernel cut = restrict_to(full.inverse.kernel, std::set<GroupPoint>(ball.begin(), ball.end()));
    EXPECT_LE(envelope_norm(cut - local.inverse.kernel), 1e-15);
    EXPECT_EQ(local.error_bound, full.error_bound);
}

TEST(Lab, ContourMatchesDirectInverse)
{
    InversionConfig cfg;
    cfg.radii = {4};
    const ContourInverse c = contour_inverse(ring_example(), 0.5, 32, cfg);
    EXPECT_LE(c.deviation_from_direct, 1e-9);
    EXPECT_LE(std::abs(c.inverse.scalar), 1e-15);
    EXPECT_THROW(contour_inverse(ring_example(), 0.5, 4, cfg), std::invalid_argument);
    EXPECT_THROW(contour_inverse(ring_example(), -1.0, 32, cfg), std::invalid_argument);
}

TEST(Lab, ContourThroughSpectrumFailsAtNode)
{
    // alpha - 1 vanishes at the first node alpha = 1.
    const Group g = Group::cyclic(4);
    const Kernel minus_one = -1.0 * identity_kernel(g, 1, g.elements());
    InversionConfig cfg;
    cfg.radii = {2};
    try {
        contour_inverse(minus_one, 1.0, 16, cfg);
        FAIL() << "expected ContourNodeFailure";
    } catch (const ContourNodeFailure& e) {
        EXPECT_EQ(e.node, 0);
    }
}

TEST(Lab, IdealProjectionBound)
{
    const Group g = Group::heisenberg();
    const Kernel k = generate_kernel(g, 2, 5, Profile::polynomial(2.0, 3), 1);
    const Envelope beta = min_envelope(k);
    for (const IdealSubspace& ideal :
         {IdealSubspace::compact_support(1), IdealSubspace::truncation(0.2), IdealSubspace::truncation(0.05, 2)}) {
        const Envelope beta_n = ideal.project(beta);
        const Kernel kn = ideal_project(k, ideal);
        EXPECT_LE(envelope_norm(k - kn), l1_distance(beta, beta_n) * (1 + 1e-12));
        const Envelope bkn = min_envelope(kn);
        for (const auto& [s, v] : bkn.values()) EXPECT_NEAR(v, beta_n.at(s), 1e-14);
    }
    Envelope too_big = beta;
    too_big.set(g.identity(), beta.at(g.identity()) * 2 + 1);
    EXPECT_THROW(ideal_project(k, too_big), std::invalid_argument);
    EXPECT_THROW(IdealSubspace::truncation(-1.0), std::invalid_argument);
}

TEST(Lab, FitRefusesEmptyEnvelope)
{
    const Group z = Group::lattice(1);
    InversionConfig cfg;
    cfg.radii = {8, 12};
    const SectionInverse r = finite_section_inverse(Kernel(z, 1), cfg);
    EXPECT_TRUE(r.report.stabilized);
    EXPECT_THROW(fit_decay(r.report), std::invalid_argument);
}

TEST(Lab, BandedHermitianDecay)
{
    const Group z = Group::lattice(1);
    const Kernel k = hermitian_part(generate_kernel(z, 2, 21, Profile::banded(1), 41));
    InversionConfig cfg;
    cfg.z = 1.0 + envelope_norm(k);
    cfg.radii = {30, 40};
    const SectionInverse r = finite_section_inverse(k, cfg);
    ASSERT_TRUE(r.report.stabilized);
    EXPECT_LT(r.report.fitted_rate, 0.0);
    EXPECT_GT(r.report.r2, 0.99);
    const NeumannInverse n = neumann_inverse(k, cfg.z, 60, r.report.inner_radius);
    EXPECT_LE(envelope_norm(n.inverse.kernel - r.inverse.kernel), n.error_bound + cfg.stabilization_tol);
}

TEST(Lab, ShiftExampleAgreesWithNeumann)
{
    InversionConfig cfg;
    cfg.radii = {20, 30, 40};
    const SectionInverse r = finite_section_inverse(shift_example(41), cfg);
    const NeumannInverse n = neumann_inverse(shift_example(41), 1.0, 45, r.report.inner_radius);
    EXPECT_LE(envelope_norm(n.inverse.kernel - r.inverse.kernel), n.error_bound + cfg.stabilization_tol);
}

TEST(Lab, IdealProjectionNoOps)
{
    const Kernel k = generate_kernel(Group::lattice(2), 2, 4, Profile::exponential(0.5, 2), 1);
    EXPECT_EQ(max_entry_distance(ideal_project(k, IdealSubspace::compact_support(2)), k), 0.0);
    EXPECT_EQ(max_entry_distance(ideal_project(k, IdealSubspace::truncation(min_envelope(k).max_value())), k), 0.0);
}

TEST(Lab, ContourDiagonalExample)
{
    const Group z = Group::lattice(1);
    Kernel a(z, 2);
    Block diag = zero_block(2);
    diag(0, 0) = 2.0;
    diag(1, 1) = 3.0;
    for (const auto& t : z.ball(6)) a.set(z.identity(), t, diag);
    InversionConfig cfg;
    cfg.radii = {6};
    const ContourInverse c = contour_inverse(a, 1.0, 64, cfg);
    for (const auto& x : z.ball(3)) {
        const Block v = c.inverse.kernel.at(x, x) + c.inverse.scalar * identity_block(2);
        EXPECT_NEAR(std::abs(v(0, 0) - 0.5), 0.0, 1e-8);
        EXPECT_NEAR(std::abs(v(1, 1) - 1.0 / 3.0), 0.0, 1e-8);
        EXPECT_NEAR(std::abs(v(0, 1)) + std::abs(v(1, 0)), 0.0, 1e-12);
    }
    EXPECT_LE(c.deviation_from_direct, 1e-8);
}
