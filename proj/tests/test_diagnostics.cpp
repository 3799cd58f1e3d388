#include "hessblow/diagnostics.hpp"
#include "hessblow/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hessblow;

namespace {

NormSeries channel_series(double A, double t_star, int n, double t_max) {
    NormSeries s;
    for (int k = 0; k < n; ++k) {
        NormSample smp;
        smp.t = t_max * k / (n - 1);
        smp.h2semi = A / (t_star - smp.t);
        smp.max_u = smp.h2semi;
        s.samples.push_back(smp);
    }
    return s;
}

}  // namespace

TEST(Norms, QuadratureOnBiquadratic) {
    const Grid g = Grid::unit_square(129);
    auto u = sample_family(SquareFamily{Rational(1)}, g, 0.0);
    const NormSample s = norms(*u);
    EXPECT_NEAR(s.l2, 0.2, 1e-4);                          // (∫x⁴y⁴)^½ = 1/5
    EXPECT_NEAR(s.h2semi, std::sqrt(112.0 / 45.0), 1e-3);  // Δu = 2x² + 2y²
    EXPECT_NEAR(s.lap_l4, std::pow(16.0 * (2.0 / 9 + 8.0 / 21 + 6.0 / 25), 0.25), 1e-3);
    EXPECT_NEAR(s.bih_l2, 8.0, 0.2);
    EXPECT_GT(s.grad_inf, 2.7);
    EXPECT_LE(s.grad_inf, 2.0 * std::sqrt(2.0));
    EXPECT_NEAR(s.max_u, std::pow(g.x(128), 4), 1e-14);
    EXPECT_GT(s.min_u, 0.0);
    EXPECT_NEAR(s.h2_norm(), std::hypot(s.l2, s.h2semi), 1e-15);
}

TEST(GnRatio, ScaleInvariantAndDegenerateOnAffine) {
    const Grid g = Grid::unit_square(33);
    auto u = sample_family(DiscFamily{Rational(1)}, g, 0.0);
    auto base = gn_ratio(*u);
    ASSERT_TRUE(base);
    for (double lambda : {1e-3, 0.5, 7.0, 1e4}) {
        GridField v = *u;
        for (double& x : v.raw()) x *= lambda;
        EXPECT_NEAR(*gn_ratio(v) / *base, 1.0, 1e-12);
    }
    auto flat = sample_family(ExpPlaneFamily{Rational(0), Rational(0), Rational(0), Rational(0), Rational(1),
                                             Rational(2), Rational(3)},
                              g, 0.0);
    EXPECT_EQ(gn_ratio(*flat).error().kind, ErrorKind::DegenerateField);
}

TEST(Gronwall, FiniteConstantOnDecayingTrajectory) {
    auto series = analytic_series(SquareFamily{Rational(1)}, Grid::unit_square(33), 0.0, 1.0, 101);
    ASSERT_TRUE(series);
    auto rep = gronwall_monitor(*series);
    ASSERT_TRUE(rep);
    EXPECT_TRUE(std::isfinite(rep->c_fit));
    EXPECT_GE(rep->c_fit, 0.0);
    EXPECT_EQ(rep->margin_series.size(), 99u);
    for (const auto& m : rep->margin_series) EXPECT_LE(m.lhs, m.rhs + 1e-12 * std::abs(m.rhs));
}

TEST(Gronwall, FitsGrowthTowardsBlowUp) {
    auto series = analytic_series(SquareFamily{Rational(-1)}, Grid::unit_square(33), 0.0, 0.08, 81);
    auto rep = gronwall_monitor(*series);
    ASSERT_TRUE(rep);
    EXPECT_GT(rep->c_fit, 0.0);
    EXPECT_GT(rep->integral_form_ratio, 0.0);
    // The integral form is bounded by the pointwise constant up to the sampling error of the
    // centred rates, which is a few percent this close to T*.
    EXPECT_LE(rep->integral_form_ratio, rep->c_fit * 1.05);
}

TEST(Gronwall, InputChecks) {
    NormSeries tiny;
    tiny.samples.resize(2);
    EXPECT_EQ(gronwall_monitor(tiny).error().kind, ErrorKind::InsufficientData);
    auto zero = analytic_series(SquareFamily{Rational(0)}, Grid::unit_square(9), 0.0, 1.0, 5);
    EXPECT_EQ(gronwall_monitor(*zero).error().kind, ErrorKind::DegenerateInitial);
}

TEST(FitBlowUpProperties, ExactChannelRecoversTStar) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> amp(0.01, 100.0), ts(0.01, 10.0);
    for (int k = 0; k < 100; ++k) {
        const double A = amp(rng), T = ts(rng);
        auto fit = fit_blowup_time(channel_series(A, T, 50, 0.95 * T), FitChannel::H2Semi);
        ASSERT_TRUE(fit);
        EXPECT_NEAR(fit->t_star_est / T, 1.0, 1e-10);
        EXPECT_LT(fit->residual, 1e-10 / A);
    }
}

TEST(FitBlowUp, AnalyticSquareSamples) {
    auto series = analytic_series(SquareFamily{Rational(-1)}, Grid::unit_square(65), 0.0, 0.9 / 12.0, 200);
    auto fit = fit_blowup_time(*series, FitChannel::H2Semi);
    ASSERT_TRUE(fit);
    EXPECT_NEAR(fit->t_star_est * 12.0, 1.0, 1e-3);
    auto decaying = analytic_series(SquareFamily{Rational(1)}, Grid::unit_square(65), 0.0, 1.0, 200);
    EXPECT_EQ(fit_blowup_time(*decaying, FitChannel::H2Semi).error().kind, ErrorKind::NoBlowUpTrend);
    EXPECT_EQ(fit_blowup_time(*decaying, FitChannel::MaxAbsU).error().kind, ErrorKind::NoBlowUpTrend);
}

TEST(FitBlowUp, InputChecks) {
    EXPECT_EQ(fit_blowup_time(channel_series(1, 1, 4, 0.5), FitChannel::H2Semi).error().kind, ErrorKind::InsufficientData);
    NormSeries flat = channel_series(1, 1, 10, 0.5);
    for (auto& s : flat.samples) s.h2semi = 2.0;
    EXPECT_EQ(fit_blowup_time(flat, FitChannel::H2Semi).error().kind, ErrorKind::NoBlowUpTrend);
}

TEST(NormSeriesCsv, RoundTripsExactly) {
    auto series = analytic_series(DiscFamily{Rational(1, 3)}, Grid::unit_square(9), 0.0, 0.01, 7);
    const std::string csv = to_csv(*series);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kNormSeriesHeader);
    auto back = norm_series_from_csv("# provenance line\n" + csv);
    ASSERT_TRUE(back);
    ASSERT_EQ(back->samples.size(), series->samples.size());
    for (std::size_t k = 0; k < back->samples.size(); ++k) {
        const auto &a = series->samples[k], &b = back->samples[k];
        EXPECT_EQ(a.t, b.t);
        EXPECT_EQ(a.dt, b.dt);
        EXPECT_EQ(a.l2, b.l2);
        EXPECT_EQ(a.h2semi, b.h2semi);
        EXPECT_EQ(a.grad_inf, b.grad_inf);
        EXPECT_EQ(a.lap_l4, b.lap_l4);
        EXPECT_EQ(a.max_u, b.max_u);
        EXPECT_EQ(a.min_u, b.min_u);
        EXPECT_TRUE(std::isnan(b.bih_l2));
    }
}

TEST(NormSeriesCsv, RejectsMalformedInput) {
    EXPECT_EQ(norm_series_from_csv("t,dt\n1,2\n").error().kind, ErrorKind::Parse);
    EXPECT_EQ(norm_series_from_csv("").error().kind, ErrorKind::Parse);
    std::string bad = std::string(kNormSeriesHeader) + "\n1,0,0,0,0,0,0,0\n0,0,0,0,0,0,0,0\n";
    EXPECT_EQ(norm_series_from_csv(bad).error().kind, ErrorKind::Parse);
}
