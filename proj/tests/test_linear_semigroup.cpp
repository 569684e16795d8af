#include "support.hpp"

#include <gtest/gtest.h>

using namespace deuler;

namespace
{

struct Sample
{
    double a, kappa2, xi, t;
};

/// Random (a, kappa2, xi, t) with a t <= 20; every fourth sample sits near the
/// critical wavenumber with |lambda_+ - lambda_-| t in [0, 1e-4].
std::vector<Sample> green_samples(int n, std::uint64_t seed)
{
    std::mt19937_64                        rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Sample>                    out;
    for (int i = 0; i < n; ++i)
    {
        Sample s;
        s.a      = 0.1 + 4.9 * u01(rng);
        s.kappa2 = 0.1 + 4.9 * u01(rng);
        s.t      = (20.0 / s.a) * u01(rng);
        if (i % 4 == 0)
        {
            const double gap  = 1e-4 * u01(rng);  // |lambda_+ - lambda_-| t = 2 |h| t
            const double h    = gap / (2.0 * std::max(s.t, 1e-300));
            const double sign = u01(rng) < 0.5 ? -1.0 : 1.0;
            s.xi = std::sqrt(std::max(0.0, 0.25 * s.a * s.a - sign * h * h)) / s.kappa2;
        }
        else
            s.xi = 10.0 * u01(rng) * u01(rng);
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST(Eigenvalues, RegimesAndVieta)
{
    const LinearCoefficients c(1.0, 1.0);
    const auto               over = eigenvalues(0.1, c);
    EXPECT_EQ(over.regime, DampingRegime::overdamped);
    EXPECT_NEAR((over.lambda_plus + over.lambda_minus).real(), -1.0, 1e-15);
    EXPECT_NEAR((over.lambda_plus * over.lambda_minus).real(), 0.01, 1e-15);
    const auto under = eigenvalues(3.0, c);
    EXPECT_EQ(under.regime, DampingRegime::underdamped);
    EXPECT_NEAR(under.lambda_plus.real(), -0.5, 1e-15);
    EXPECT_NEAR(std::abs(under.lambda_plus.imag()), std::sqrt(9.0 - 0.25), 1e-14);
    EXPECT_EQ(eigenvalues(0.5, c).regime, DampingRegime::critical);
    EXPECT_THROW(eigenvalues(-1.0, c), DomainError);
}

TEST(Eigenvalues, SmallRootIsAccurateAtLowFrequency)
{
    // lambda_- ~ -kappa2^2 xi^2 / a without cancellation
    const LinearCoefficients c(2.0, 1.5);
    const double             xi = 1e-6;
    EXPECT_NEAR(eigenvalues(xi, c).lambda_minus.real() / (-1.5 * 1.5 * xi * xi / 2.0), 1.0, 1e-10);
}

TEST(GreenHat, MatchesMatrixExponentialOracle)
{
    double worst = 0.0;
    for (const auto& s : green_samples(1000, 17))
    {
        const LinearCoefficients c(s.a, s.kappa2);
        const double             err = oracle::rel_diff(green_hat(s.xi, s.t, c), oracle::green(s.xi, s.t, s.a, s.kappa2));
        worst = std::max(worst, err);
        ASSERT_LT(err, 1e-10) << "a=" << s.a << " kappa2=" << s.kappa2 << " xi=" << s.xi << " t=" << s.t;
    }
    RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(GreenHat, IdentityAtZeroTime)
{
    const LinearCoefficients c(1.3, 0.7);
    for (double xi : {0.0, 0.1, c.critical_wavenumber(), 4.0, 1e3})
    {
        const auto g = green_hat(xi, 0.0, c);
        EXPECT_LE((g - GreenMatrix::identity()).frobenius(), 1e-14);
    }
}

TEST(GreenHat, DeterminantIsDamping)
{
    for (const auto& s : green_samples(200, 5))
    {
        const LinearCoefficients c(s.a, s.kappa2);
        // absolute: g11 g22 - g12 g21 cancels when det is tiny against the entries
        EXPECT_NEAR(green_hat(s.xi, s.t, c).determinant(), std::exp(-s.a * s.t), 1e-10);
    }
}

TEST(GreenHat, SemigroupProperty)
{
    std::mt19937_64                        rng(23);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 1000; ++i)
    {
        const LinearCoefficients c(0.1 + 4.9 * u01(rng), 0.1 + 4.9 * u01(rng));
        const double             xi = i % 5 == 0 ? c.critical_wavenumber() * (1.0 + 1e-9 * (u01(rng) - 0.5))
                                                 : 10.0 * u01(rng) * u01(rng);
        const double t = (10.0 / c.a) * u01(rng);
        const double s = (10.0 / c.a) * u01(rng);
        const auto   lhs = green_hat(xi, t + s, c);
        const auto   rhs = green_hat(xi, t, c) * green_hat(xi, s, c);
        ASSERT_LE((lhs - rhs).frobenius(), 1e-10 * std::max(1.0, rhs.frobenius()) )
            << "xi=" << xi << " t=" << t << " s=" << s;
    }
}

TEST(GreenHat, ZeroFrequency)
{
    const LinearCoefficients c(2.0, 1.0);
    const auto               g = green_hat(0.0, 1.5, c);
    EXPECT_EQ(g.g11, 1.0);
    EXPECT_NEAR(g.g22, std::exp(-3.0), 1e-15);
    EXPECT_EQ(g.g12, 0.0);
}

TEST(GreenHat, RejectsNegativeArguments)
{
    const LinearCoefficients c(1.0, 1.0);
    EXPECT_THROW(green_hat(1.0, -1.0, c), DomainError);
    EXPECT_THROW(green_hat(-1.0, 1.0, c), DomainError);
}

TEST(GreenHat, ContinuousAcrossSeriesSwitch)
{
    const LinearCoefficients c(1.0, 1.0);
    const double             xc = c.critical_wavenumber();
    const double             t  = 3.0;
    // 2 sqrt|h^2| t crosses 1e-6 at xi - xc ~ 1e-6 ^2 / (...)
    for (double d : {1e-14, 1e-13, 1e-12, 1e-11, 1e-10})
        for (double sign : {-1.0, 1.0})
        {
            const double xi = xc + sign * d;
            EXPECT_LT(oracle::rel_diff(green_hat(xi, t, c), oracle::green(xi, t, 1.0, 1.0)), 1e-12);
        }
}

TEST(LowFrequency, ApproximatesGreenForSmallXi)
{
    const LinearCoefficients c(1.0, 1.0);
    for (double t : {5.0, 20.0})
    {
        const double xi  = 0.02;
        const auto   ref = green_hat(xi, t, c);
        const auto   lf  = low_freq_approx(xi, t, c, DiffusionVariant::exact);
        EXPECT_LT((lf - ref).frobenius(), 1e-3) << "t=" << t;
    }
}

TEST(LowFrequency, VariantsAgreeWhenDampingIsOne)
{
    const LinearCoefficients c(1.0, 1.3);
    const auto               x = low_freq_approx(0.05, 3.0, c, DiffusionVariant::exact);
    const auto               y = low_freq_approx(0.05, 3.0, c, DiffusionVariant::squared_damping);
    EXPECT_LT((x - y).frobenius(), 1e-15);
}

TEST(HighFrequency, UniformBoundAboveEta)
{
    const LinearCoefficients c(1.0, 1.0);
    std::vector<double>      xi, ts;
    for (int i = 0; i < 200; ++i)
        xi.push_back(0.2 + 0.1 * i);
    for (int i = 0; i <= 50; ++i)
        ts.push_back(0.4 * i);
    const auto b = high_freq_bound(0.2, c, xi, ts);
    EXPECT_FALSE(b.violation);
    EXPECT_GT(b.R0_emp, 0.0);
    EXPECT_LE(b.R0_emp, 0.5);
    EXPECT_TRUE(std::isfinite(b.C_emp));
    EXPECT_GE(b.C_emp, 1.0);
    EXPECT_THROW(high_freq_bound(0.0, c, xi, ts), DomainError);
}

TEST(PhiFunctions, MatchSeriesOracle)
{
    const auto               grid = make_grid(8, 2.0 * std::numbers::pi);
    const LinearCoefficients c(1.0, 1.2);
    const double             tau   = 0.05;
    const auto               table = make_phi_table(*grid, tau, c);
    for (std::size_t n = 0; n < table.longitudinal.size(); n += 3)
    {
        const double xi = std::sqrt(static_cast<double>(n));
        for (int j = 0; j < PhiTable::order; ++j)
            EXPECT_LT(oracle::rel_diff(table.longitudinal[n][j], oracle::phi(j, xi, tau, 1.0, 1.2)), 1e-12)
                << "kindex=" << n << " j=" << j;
    }
    EXPECT_NEAR(table.transverse[0], std::exp(-tau), 1e-15);
    EXPECT_NEAR(table.transverse[1], -std::expm1(-tau) / tau, 1e-14);
    EXPECT_NEAR(table.entropy[3], 1.0 / 6.0, 1e-15);
}

TEST(Propagate, PureOmegaDecaysExponentially)
{
    const auto grid   = make_grid(16, 2.0 * std::numbers::pi);
    const auto params = PhysicalParams::defaults();
    const auto& g     = *grid;
    auto        fs    = FourierState::zeros(grid);
    fs.omega_hat      = hodge_decompose(curl(forward(oracle::random_vector(g, 3), g), g), g).omega_hat;
    const auto   u0   = from_fourier(fs);
    const double n0   = norm(u0.u, NormKind::L2, g);
    for (double t : {1.0, 5.0})
    {
        const auto   ut = from_fourier(propagate_linear(fs, t, params));
        const double nt = norm(ut.u, NormKind::L2, g);
        EXPECT_NEAR(nt / (std::exp(-params.a * t) * n0), 1.0, 1e-10);
        EXPECT_LT(norm(ut.p, NormKind::L2, g), 1e-14);
    }
}

TEST(Propagate, MatchesModewiseGreen)
{
    const auto  grid   = make_grid(8, 4.0);
    const auto  params = PhysicalParams::defaults();
    const auto& g      = *grid;
    auto        st     = make_initial(InitialKind::random_smooth, 0.1, 0.4, 2, grid, params);
    const auto  fs     = to_fourier(st);
    const auto  out    = propagate_linear(fs, 0.7, params);
    g.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto   k  = g.kvec(i, j, l);
        const double km = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        const auto   G  = oracle::green(km, 0.7, params.a, params.kappa2());
        EXPECT_LT(std::abs(out.p_hat[idx] - (G.g11 * fs.p_hat[idx] + G.g12 * fs.v_hat[idx])), 1e-15);
        EXPECT_LT(std::abs(out.v_hat[idx] - (G.g21 * fs.p_hat[idx] + G.g22 * fs.v_hat[idx])), 1e-15);
        EXPECT_EQ(out.s_hat[idx], fs.s_hat[idx]);
    });
}

TEST(WholeSpace, QuadratureMatchesSimpson)
{
    const auto               profile = RadialProfile::gaussian(1.0, 0.7, 0.4, 1.0);
    const LinearCoefficients c(1.0, std::sqrt(2.5 / 1.5));
    for (double t : {0.0, 3.0, 80.0})
        for (int kk : {0, 2})
        {
            const auto q  = whole_space_norm(profile, t, kk, WholeSpaceComponent::velocity, c);
            const double s = oracle::simpson(
                [&](double r) {
                    return 4.0 * std::numbers::pi * r * r * std::pow(r, 2 * kk) *
                           whole_space_density(profile, r, t, WholeSpaceComponent::velocity, c);
                },
                0.0, profile.r_cut, 200000);
            EXPECT_NEAR(q.integral / s, 1.0, 1e-8) << "t=" << t << " k=" << kk;
            EXPECT_LE(q.relative_error(), 1e-8);
        }
}

TEST(WholeSpace, PureGaussianPressureAtTimeZero)
{
    // int_{R^3} e^{-2 r^2} dxi = (pi / 2)^{3/2}
    const auto               profile = RadialProfile::gaussian(1.0);
    const LinearCoefficients c(1.0, 1.0);
    const auto               q = whole_space_norm(profile, 0.0, 0, WholeSpaceComponent::pressure, c);
    EXPECT_NEAR(q.integral, std::pow(std::numbers::pi / 2.0, 1.5), 1e-12);
}

TEST(WholeSpace, AveragedWeightMatchesSphereMean)
{
    // sphere mean of xi_1^4 is r^4 / 5, of xi_1^2 xi_2^2 is r^4 / 15
    EXPECT_NEAR(averaged_sobolev_weight(2.0, 2, 2), 16.0 * (3.0 / 5.0 + 3.0 / 15.0), 1e-12);
    EXPECT_NEAR(averaged_sobolev_weight(2.0, 1, 1), 4.0, 1e-14);
    EXPECT_NEAR(averaged_sobolev_weight(2.0, 0, 0), 1.0, 1e-15);
}

TEST(WholeSpace, RejectsBadArguments)
{
    const auto               profile = RadialProfile::gaussian(1.0);
    const LinearCoefficients c(1.0, 1.0);
    EXPECT_THROW(whole_space_norm(profile, 1.0, 4, WholeSpaceComponent::pressure, c), DomainError);
    EXPECT_THROW(whole_space_norm(profile, -1.0, 0, WholeSpaceComponent::pressure, c), DomainError);
}
