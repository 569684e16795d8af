#include "support.hpp"

#include <gtest/gtest.h>

using namespace deuler;

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

RealField sample(const SpectralGrid& g, const std::function<double(double, double, double)>& f)
{
    RealField out(g.real_size());
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int l = 0; l < g.n(); ++l)
                out[g.real_index(i, j, l)] = f(g.coordinate(i), g.coordinate(j), g.coordinate(l));
    return out;
}

double max_abs_diff(const RealField& a, const RealField& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST(SpectralGrid, RejectsBadSizes)
{
    EXPECT_THROW(SpectralGrid(12, 1.0), DomainError);
    EXPECT_THROW(SpectralGrid(2, 1.0), DomainError);
    EXPECT_THROW(SpectralGrid(8, 0.0), DomainError);
    EXPECT_NO_THROW(SpectralGrid(8, 1.0));
}

TEST(SpectralGrid, ForwardInverseRoundTrip)
{
    const SpectralGrid g(16, 3.0);
    const auto         f = sample(g, [](double x, double y, double z) { return std::sin(x) * std::cos(2 * y) + z * z; });
    EXPECT_LT(max_abs_diff(g.inverse(g.forward(f)), f), 1e-12);
}

TEST(SpectralGrid, ForwardIsNormalised)
{
    const SpectralGrid g(8, two_pi);
    const RealField    ones(g.real_size(), 2.5);
    const auto         spec = g.forward(ones);
    EXPECT_NEAR(spec[0].real(), 2.5, 1e-14);
    for (std::size_t i = 1; i < spec.size(); ++i)
        EXPECT_LT(std::abs(spec[i]), 1e-14);
}

TEST(SpectralGrid, ParsevalMatchesGridSum)
{
    const SpectralGrid g(16, 5.0);
    const auto         f = oracle::random_vector(g, 9)[0];
    double             direct = 0.0;
    for (double v : f)
        direct += v * v;
    direct *= g.cell_volume();
    const double spectral = sobolev_norm_squared(g.forward(f), 0, g);
    EXPECT_NEAR(spectral, direct, 1e-12 * direct);
}

TEST(SpectralGrid, NyquistDerivativeWavenumberIsZero)
{
    const SpectralGrid g(8, two_pi);
    const auto         k = g.derivative_wavenumbers();
    EXPECT_EQ(k[4], 0.0);
    EXPECT_EQ(k[1], 1.0);
    EXPECT_EQ(k[7], -1.0);
    EXPECT_EQ(g.max_kindex(), 3 * 9);
}

TEST(SpectralOps, DerivativesOfTrigPolynomials)
{
    const SpectralGrid g(16, two_pi);
    const auto f  = sample(g, [](double x, double y, double z) { return std::sin(2 * x) * std::cos(y) + std::sin(3 * z); });
    const auto fh = g.forward(f);
    const auto dx = g.inverse(partial(fh, 0, g));
    const auto dz = g.inverse(partial(fh, 2, g));
    EXPECT_LT(max_abs_diff(dx, sample(g, [](double x, double y, double) { return 2 * std::cos(2 * x) * std::cos(y); })),
              1e-12);
    EXPECT_LT(max_abs_diff(dz, sample(g, [](double, double, double z) { return 3 * std::cos(3 * z); })), 1e-12);
    const auto lap = g.inverse(laplacian(fh, g));
    EXPECT_LT(max_abs_diff(lap, sample(g, [](double x, double y, double z) {
                  return -5 * std::sin(2 * x) * std::cos(y) - 9 * std::sin(3 * z);
              })),
              1e-11);
}

TEST(SpectralOps, CurlOfGradientVanishes)
{
    const SpectralGrid g(16, 4.0);
    const auto         f = oracle::random_vector(g, 4)[0];
    const auto         c = curl(gradient(g.forward(f), g), g);
    for (const auto& comp : c)
        for (const auto& v : comp)
            EXPECT_LT(std::abs(v), 1e-12);
}

TEST(SpectralOps, DivergenceOfCurlVanishes)
{
    const SpectralGrid g(16, 4.0);
    const auto         u = forward(oracle::random_vector(g, 5), g);
    for (const auto& v : divergence(curl(u, g), g))
        EXPECT_LT(std::abs(v), 1e-12);
}

TEST(SpectralOps, LambdaPowerComposes)
{
    const SpectralGrid g(16, 3.0);
    const auto         fh  = g.forward(oracle::random_vector(g, 6)[0]);
    const auto         a   = lambda_power(lambda_power(fh, 1.0, g), 1.0, g);
    const auto         lap = laplacian(fh, g);
    for (std::size_t i = 0; i < fh.size(); ++i)
        EXPECT_LT(std::abs(a[i] + lap[i]), 1e-10);
}

TEST(SpectralOps, SobolevWeightCountsMultiIndices)
{
    // |alpha| <= 1: 1 + k1^2 + k2^2 + k3^2
    EXPECT_NEAR(sobolev_weight({1.0, 2.0, 3.0}, 1), 15.0, 1e-14);
    // |alpha| = 2 adds k1^4 + k2^4 + k3^4 + k1^2 k2^2 + k1^2 k3^2 + k2^2 k3^2
    EXPECT_NEAR(sobolev_weight({1.0, 2.0, 3.0}, 2), 15.0 + 98.0 + 4.0 + 9.0 + 36.0, 1e-12);
    EXPECT_THROW(sobolev_weight({0, 0, 0}, 4), DomainError);
}

TEST(SpectralOps, SobolevNormOfSingleMode)
{
    // ||sin x||_{H^k}^2 = (2 pi)^3 / 2 * (1 + 1 + ... ) with one term per order
    const SpectralGrid g(8, two_pi);
    const auto         f    = sample(g, [](double x, double, double) { return std::sin(x); });
    const double       base = std::pow(two_pi, 3) / 2.0;
    for (int k = 0; k <= 3; ++k)
        EXPECT_NEAR(norm(f, NormKind::H, g, k), std::sqrt(base * (k + 1)), 1e-10);
}

TEST(SpectralOps, DealiasRuleKeepsTwoThirds)
{
    const SpectralGrid g(16, 1.0);
    EXPECT_TRUE(dealias_keep(g, 5, 0, 0));
    EXPECT_FALSE(dealias_keep(g, 6, 0, 0));
    EXPECT_TRUE(dealias_keep(g, 11, 0, 0));   // m = -5
    EXPECT_FALSE(dealias_keep(g, 10, 0, 0));  // m = -6
    EXPECT_FALSE(dealias_keep(g, 0, 0, 6));
}

TEST(SpectralOps, LqNormsOfConstant)
{
    const SpectralGrid g(8, 2.0);
    const RealField    f(g.real_size(), -3.0);
    EXPECT_NEAR(lq_norm(f, 2.0, g), 3.0 * std::sqrt(8.0), 1e-12);
    EXPECT_NEAR(norm(f, NormKind::L1, g), 24.0, 1e-12);
    EXPECT_NEAR(norm(f, NormKind::Linf, g), 3.0, 0.0);
    EXPECT_THROW(lq_norm(f, 0.5, g), DomainError);
}

class HodgeTest : public ::testing::Test
{
protected:
    SpectralGrid g{32, two_pi};
};

TEST_F(HodgeTest, RoundTripRandomField)
{
    const auto u     = forward(oracle::random_vector(g, 11, 0.3), g);
    const auto split = hodge_decompose(u, g);
    EXPECT_FALSE(split.mean_dropped);
    const auto back = hodge_reconstruct(split.v_hat, split.omega_hat, g);
    double     num = 0.0, den = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < u[c].size(); ++i)
        {
            num += std::norm(back[c][i] - u[c][i]);
            den += std::norm(u[c][i]);
        }
    EXPECT_LT(std::sqrt(num / den), 1e-12);
}

TEST_F(HodgeTest, EnergySplits)
{
    const auto   u     = forward(oracle::random_vector(g, 12, 0.3), g);
    const auto   split = hodge_decompose(u, g);
    const double total = sobolev_norm_squared(u[0], 0, g) + sobolev_norm_squared(u[1], 0, g) +
                         sobolev_norm_squared(u[2], 0, g);
    const double parts = sobolev_norm_squared(split.v_hat, 0, g) + 0.5 * omega_norm_squared(split.omega_hat, g);
    EXPECT_NEAR(parts, total, 1e-12 * total);
}

TEST_F(HodgeTest, CurlFreeHasNoOmega)
{
    const auto f     = oracle::random_vector(g, 13, 0.3)[0];
    const auto u     = gradient(g.forward(f), g);
    const auto split = hodge_decompose(u, g);
    EXPECT_LE(std::sqrt(omega_norm_squared(split.omega_hat, g)), 1e-13);
    EXPECT_GT(std::sqrt(sobolev_norm_squared(split.v_hat, 0, g)), 1.0);
}

TEST_F(HodgeTest, DivergenceFreeHasNoV)
{
    const auto u     = curl(forward(oracle::random_vector(g, 14, 0.3), g), g);
    const auto split = hodge_decompose(u, g);
    EXPECT_LE(std::sqrt(sobolev_norm_squared(split.v_hat, 0, g)), 1e-13);
}

TEST_F(HodgeTest, MeanFlowIsFlagged)
{
    VectorField u = oracle::random_vector(g, 15, 0.3);
    for (auto& v : u[1])
        v += 0.5;
    EXPECT_TRUE(hodge_decompose(u, g).mean_dropped);
}

TEST_F(HodgeTest, OmegaIsAntisymmetric)
{
    const auto split = hodge_decompose(forward(oracle::random_vector(g, 16, 0.3), g), g);
    for (std::size_t m = 0; m < split.v_hat.size(); m += 97)
    {
        EXPECT_EQ(split.omega_hat.at(0, 0, m), Complex{});
        EXPECT_EQ(split.omega_hat.at(1, 2, m), -split.omega_hat.at(2, 1, m));
    }
}

TEST(FourierState, StateRoundTripKeepsMeanFreeFields)
{
    const auto grid = make_grid(16, 6.0);
    const auto st   = make_initial(InitialKind::random_smooth, 0.1, 0.6, 7, grid, PhysicalParams::defaults());
    bool       dropped = true;
    const auto fs      = to_fourier(st, &dropped);
    EXPECT_FALSE(dropped);
    const auto back = from_fourier(fs);
    EXPECT_LT(max_abs_diff(back.p, st.p), 1e-14);
    for (int c = 0; c < 3; ++c)
        EXPECT_LT(max_abs_diff(back.u[c], st.u[c]), 1e-14);
}
