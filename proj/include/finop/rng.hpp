#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; normals come from our own
// Box-Muller so results are bit-stable across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // (0, 1]: never zero, safe under log()
        return (static_cast<double>(engine_()) + 1.0) * 0x1.0p-64;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx gaussian_complex() { return cplx(gaussian(), gaussian()); }

    Matrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian_complex();
        return m;
    }

    Matrix hermitian(std::size_t n) {
        const Matrix g = gaussian_matrix(n, n);
        return (g + g.adjoint()) * cplx(0.5);
    }

    // Haar-ish unitary: Gram-Schmidt applied to a Gaussian matrix.
    Matrix unitary(std::size_t n) {
        const Matrix g = gaussian_matrix(n, n);
        std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) cols[j][i] = g(i, j);
        const auto q = gram_schmidt(cols);
        Matrix u(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) u(i, j) = q[j][i];
        return u;
    }

    // Random density matrix: normalized Wishart, full rank a.s.
    Matrix density(std::size_t n) {
        const Matrix g = gaussian_matrix(n, n);
        Matrix rho = g * g.adjoint();
        const double t = std::real(trace(rho));
        return rho * cplx(1.0 / t);
    }

    std::vector<cplx> vector(std::size_t n) {
        std::vector<cplx> v(n);
        for (auto& z : v) z = gaussian_complex();
        return v;
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace finop
