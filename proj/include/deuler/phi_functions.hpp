#ifndef DEULER_PHI_FUNCTIONS_HPP
#define DEULER_PHI_FUNCTIONS_HPP

#include "deuler/green.hpp"
#include "deuler/grid.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <vector>

namespace deuler
{

/// phi_0 .. phi_3 of tau * L for every |k| on a grid, where L is the linear
/// operator of the reformulated system restricted to one Fourier mode:
///   - a 2x2 block on (p_hat, v_hat)        : A(k) = [[0, -kappa2 |k|], [kappa2 |k|, -a]]
///   - a scalar on the divergence-free part : -a
///   - a scalar on the entropy              : 0
/// phi_0 is exp; phi_{j+1}(z) = (phi_j(z) - 1/j!) / z.
struct PhiTable
{
    static constexpr int order = 4;

    double                                      tau = 0.0;
    std::vector<std::array<GreenMatrix, order>> longitudinal;  ///< indexed by grid kindex
    std::array<double, order>                   transverse{};
    std::array<double, order>                   entropy{};
};

namespace detail
{
/// phi_1..phi_3 of an n x n matrix from the exponential of the block matrix
/// [[M, I, 0, 0], [0, 0, I, 0], [0, 0, 0, I], [0, 0, 0, 0]]; the top block row is
/// [exp(M), phi_1(M), phi_2(M), phi_3(M)].
inline std::array<Eigen::MatrixXd, 4> phi_blocks(const Eigen::MatrixXd& m)
{
    const auto      n = m.rows();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    aug.topLeftCorner(n, n) = m;
    for (int b = 0; b < 3; ++b)
        aug.block(b * n, (b + 1) * n, n, n).setIdentity();
    const Eigen::MatrixXd e = aug.exp();
    return {e.block(0, 0, n, n), e.block(0, n, n, n), e.block(0, 2 * n, n, n), e.block(0, 3 * n, n, n)};
}
} // namespace detail

inline PhiTable make_phi_table(const SpectralGrid& grid, double tau, const LinearCoefficients& c)
{
    PhiTable table;
    table.tau = tau;
    table.longitudinal.resize(static_cast<std::size_t>(grid.max_kindex()) + 1);
    const double k0 = grid.fundamental();
    for (std::size_t n = 0; n < table.longitudinal.size(); ++n)
    {
        const double    kmag = k0 * std::sqrt(static_cast<double>(n));
        Eigen::Matrix2d a;
        a << 0.0, -c.kappa2 * kmag, c.kappa2 * kmag, -c.a;
        const auto blocks = detail::phi_blocks(tau * a);
        auto&      row    = table.longitudinal[n];
        // the exact propagator, not the Pade approximant
        row[0] = green_hat(kmag, tau, c);
        for (int j = 1; j < PhiTable::order; ++j)
            row[j] = {blocks[j](0, 0), blocks[j](0, 1), blocks[j](1, 0), blocks[j](1, 1)};
    }
    Eigen::MatrixXd scalar(1, 1);
    scalar(0, 0)          = -c.a * tau;
    const auto sblocks    = detail::phi_blocks(scalar);
    table.transverse[0]   = std::exp(-c.a * tau);
    double factorial      = 1.0;
    for (int j = 0; j < PhiTable::order; ++j)
    {
        if (j > 0)
        {
            table.transverse[j] = sblocks[j](0, 0);
            factorial *= j;
        }
        table.entropy[j] = 1.0 / factorial;
    }
    return table;
}

} // namespace deuler

#endif // DEULER_PHI_FUNCTIONS_HPP
