#ifndef DEULER_GRID_HPP
#define DEULER_GRID_HPP

#include "deuler/params.hpp"

#include <fftw3.h>

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace deuler
{

using Complex        = std::complex<double>;
using RealField      = std::vector<double>;
using SpectralField  = std::vector<Complex>;
using VectorField    = std::array<RealField, 3>;
using SpectralVector = std::array<SpectralField, 3>;

/// Thrown when fields of different sizes (or from different grids) are mixed.
class ShapeError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail
{

/// Owns one r2c / c2r plan pair. Plans are created on private scratch buffers
/// with FFTW_UNALIGNED so they can be executed on any std::vector storage.
class FftPlans
{
public:
    explicit FftPlans(int n)
        : real_(static_cast<std::size_t>(n) * n * n), spec_(static_cast<std::size_t>(n) * n * (n / 2 + 1))
    {
        auto* cdata = reinterpret_cast<fftw_complex*>(spec_.data());
        forward_    = fftw_plan_dft_r2c_3d(n, n, n, real_.data(), cdata, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_   = fftw_plan_dft_c2r_3d(n, n, n, cdata, real_.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (forward_ == nullptr || backward_ == nullptr)
            throw std::runtime_error("FFTW plan creation failed");
    }
    FftPlans(const FftPlans&)            = delete;
    FftPlans& operator=(const FftPlans&) = delete;
    ~FftPlans()
    {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    void forward(const double* in, Complex* out) const
    {
        // r2c leaves its input intact, the const_cast is only for the C signature
        fftw_execute_dft_r2c(forward_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    }
    /// c2r destroys `in`.
    void backward(Complex* in, double* out) const
    {
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
    }

private:
    std::vector<double>  real_;
    std::vector<Complex> spec_;
    fftw_plan            forward_  = nullptr;
    fftw_plan            backward_ = nullptr;
};

} // namespace detail

/// Periodic cube [0, L)^3 sampled at N^3 points, together with its
/// half-complex spectral layout (N x N x (N/2+1), last axis halved).
///
/// Every differential or Fourier-multiplier operator uses the *derivative*
/// wavevector, in which the Nyquist component of each axis is replaced by 0.
/// This keeps odd-order multipliers real-preserving and makes all operators
/// (grad, div, Lambda^r, Hodge split) use one consistent symbol.
class SpectralGrid
{
public:
    SpectralGrid(int n, double length) : n_(n), length_(length)
    {
        if (n < 4 || (n & (n - 1)) != 0)
            throw DomainError("SpectralGrid: N must be a power of two and at least 4, got " + std::to_string(n));
        if (!(length > 0.0) || !std::isfinite(length))
            throw DomainError("SpectralGrid: box length must be positive");
        const double k0 = 2.0 * std::numbers::pi / length;
        wavenumbers_.resize(n);
        derivative_.resize(n);
        for (int i = 0; i < n; ++i)
        {
            const int m      = signed_index(i);
            wavenumbers_[i]  = k0 * m;
            derivative_[i]   = (i == n / 2) ? 0.0 : k0 * m;
        }
        plans_ = std::make_shared<detail::FftPlans>(n);
    }

    [[nodiscard]] int    n() const { return n_; }
    [[nodiscard]] double length() const { return length_; }
    [[nodiscard]] double dx() const { return length_ / n_; }
    [[nodiscard]] double volume() const { return length_ * length_ * length_; }
    [[nodiscard]] double cell_volume() const { return dx() * dx() * dx(); }
    [[nodiscard]] double fundamental() const { return 2.0 * std::numbers::pi / length_; }

    [[nodiscard]] std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    [[nodiscard]] int         half() const { return n_ / 2 + 1; }
    [[nodiscard]] std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * n_ * half(); }

    /// Integer frequency of storage index i in the symmetric range [-N/2, N/2).
    [[nodiscard]] int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }

    /// (2 pi / L) m for the full axes; index i = N/2 is the Nyquist entry -N/2.
    [[nodiscard]] const std::vector<double>& wavenumbers() const { return wavenumbers_; }
    [[nodiscard]] const std::vector<double>& derivative_wavenumbers() const { return derivative_; }

    [[nodiscard]] std::size_t real_index(int i, int j, int l) const
    {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
    }
    [[nodiscard]] std::size_t spectral_index(int i, int j, int l) const
    {
        return (static_cast<std::size_t>(i) * n_ + j) * half() + l;
    }

    /// Derivative wavevector of spectral mode (i, j, l).
    [[nodiscard]] std::array<double, 3> kvec(int i, int j, int l) const
    {
        return {derivative_[i], derivative_[j], derivative_[l]};
    }

    /// Integer |m|^2 of the derivative wavevector; indexes per-|k| lookup tables.
    [[nodiscard]] int kindex(int i, int j, int l) const
    {
        auto eff = [&](int idx) { return idx == n_ / 2 ? 0 : signed_index(idx); };
        const int a = eff(i), b = eff(j), c = eff(l);
        return a * a + b * b + c * c;
    }
    [[nodiscard]] int max_kindex() const { return 3 * (n_ / 2 - 1) * (n_ / 2 - 1); }

    /// Multiplicity of a half-spectrum mode in a full-spectrum sum.
    [[nodiscard]] double mode_weight(int l) const { return (l == 0 || l == n_ / 2) ? 1.0 : 2.0; }

    [[nodiscard]] double coordinate(int i) const { return dx() * i; }

    /// Forward transform, normalised by 1/N^3.
    [[nodiscard]] SpectralField forward(std::span<const double> field) const
    {
        check_real(field);
        SpectralField out(spectral_size());
        plans_->forward(field.data(), out.data());
        const double scale = 1.0 / static_cast<double>(real_size());
        for (auto& c : out)
            c *= scale;
        return out;
    }

    /// Inverse transform (no scaling), the exact inverse of forward().
    [[nodiscard]] RealField inverse(std::span<const Complex> spectrum) const
    {
        check_spectral(spectrum);
        SpectralField scratch(spectrum.begin(), spectrum.end());
        RealField     out(real_size());
        plans_->backward(scratch.data(), out.data());
        return out;
    }

    [[nodiscard]] RealField     zeros() const { return RealField(real_size(), 0.0); }
    [[nodiscard]] SpectralField spectral_zeros() const { return SpectralField(spectral_size(), Complex{}); }

    void check_real(std::span<const double> field) const
    {
        if (field.size() != real_size())
            throw ShapeError("field has " + std::to_string(field.size()) + " samples, grid expects " +
                             std::to_string(real_size()));
    }
    void check_spectral(std::span<const Complex> field) const
    {
        if (field.size() != spectral_size())
            throw ShapeError("spectrum has " + std::to_string(field.size()) + " modes, grid expects " +
                             std::to_string(spectral_size()));
    }

    friend bool operator==(const SpectralGrid& lhs, const SpectralGrid& rhs)
    {
        return lhs.n_ == rhs.n_ && lhs.length_ == rhs.length_;
    }

    /// Calls fn(index, i, j, l) for every half-spectrum mode in storage order.
    template < typename Fn >
    void for_each_mode(Fn&& fn) const
    {
        std::size_t idx = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int l = 0; l < half(); ++l, ++idx)
                    fn(idx, i, j, l);
    }

private:
    int                                n_;
    double                             length_;
    std::vector<double>                wavenumbers_;
    std::vector<double>                derivative_;
    std::shared_ptr<detail::FftPlans>  plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

inline GridPtr make_grid(int n, double length) { return std::make_shared<const SpectralGrid>(n, length); }

} // namespace deuler

#endif // DEULER_GRID_HPP
