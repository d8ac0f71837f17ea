#include <catch2/catch_amalgamated.hpp>

#include "finop/brownian.hpp"

using namespace finop;

namespace {
constexpr double PI = 3.14159265358979323846;
// analytic spectrum of the min(s,t) kernel: the boundary problem
// -u'' = u/mu, u(0) = 0, u'(1) = 0 gives mu_k = ((k - 1/2) pi)^{-2} with
// eigenfunctions sqrt(2) sin((k - 1/2) pi t)
double analytic_eigenvalue(std::size_t k) {
    const double w = (static_cast<double>(k) - 0.5) * PI;
    return 1.0 / (w * w);
}
}  // namespace

TEST_CASE("discretized kernel is symmetric PSD with trace 1/2", "[brownian]") {
    const KernelDiscretization k = brownian_kernel(128);
    CHECK(is_hermitian(k.matrix, Tolerance{1e-14, 1e-14}));
    const EigResult e = eigh(k.matrix);
    CHECK(e.values.back() >= -1e-12);
    CHECK(std::real(trace(k.matrix)) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("KL eigenvalues match the analytic spectrum", "[brownian]") {
    const KLBasis basis = kl_decompose(512, 8);
    CHECK(std::abs(basis.eigenvalues[0] - analytic_eigenvalue(1)) / analytic_eigenvalue(1) < 1e-3);
    CHECK(std::abs(basis.eigenvalues[1] - analytic_eigenvalue(2)) / analytic_eigenvalue(2) < 1e-3);
    CHECK(basis.eigenvalues[0] == Catch::Approx(4.0 / (PI * PI)).epsilon(1e-3));

    // eigenfunctions approximate sqrt(2) sin((k-1/2) pi t) and vanish at 0
    for (std::size_t m = 0; m < 3; ++m) {
        const double w = (static_cast<double>(m) + 0.5) * PI;
        double worst = 0.0;
        for (std::size_t j = 0; j < 512; ++j) {
            const double expect = std::sqrt(2.0) * std::sin(w * basis.grid[j]);
            worst = std::max(worst, std::abs(std::abs(basis.functions[m][j]) - std::abs(expect)));
        }
        CHECK(worst < 2e-3);
        // extrapolated value at t = 0
        const double at0 = 1.5 * basis.functions[m][0] - 0.5 * basis.functions[m][1];
        CHECK(std::abs(at0) < 1e-3 * std::sqrt(2.0) * w);
    }

    // quadrature orthonormality
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            double ip = 0.0;
            for (std::size_t j = 0; j < 512; ++j)
                ip += basis.functions[a][j] * basis.functions[b][j];
            ip /= 512.0;
            CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
        }

    CHECK_THROWS_AS(kl_decompose(16, 17), error);
}

TEST_CASE("KL truncation error matches the trace", "[brownian]") {
    const std::size_t n = 512, m = 64;
    const KLBasis basis = kl_decompose(n, m);
    const KernelDiscretization k = brownian_kernel(n);
    double partial = 0.0;
    for (double lam : basis.eigenvalues) partial += lam;
    // sum of the remaining eigenvalues = trace - partial sum >= 0
    const double tail = std::real(trace(k.matrix)) - partial;
    CHECK(tail >= -1e-12);
    CHECK(std::real(trace(k.matrix)) == Catch::Approx(0.5).margin(1e-3));
    // analytic tail: sum_{k>m} ((k-1/2)pi)^{-2} ~ 1/(pi^2 m)
    CHECK(tail == Catch::Approx(1.0 / (PI * PI * m)).epsilon(0.15));
}

TEST_CASE("kernel inverts the second derivative", "[brownian]") {
    const std::size_t n = 512;

    // f = 1: u(t) = t - t^2/2
    {
        const KernelOdeReport rep = kernel_solves_ode(std::vector<double>(n, 1.0), n);
        CHECK(rep.interior_residual < 1e-3);
        CHECK(std::abs(rep.left_boundary_value) < 1e-3);
        const KernelDiscretization k = brownian_kernel(n);
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = k.grid[j];
            worst = std::max(worst, std::abs(rep.solution[j] - (t - 0.5 * t * t)));
        }
        CHECK(worst < 1e-3);
    }

    // f = 0: u = 0
    {
        const KernelOdeReport rep = kernel_solves_ode(std::vector<double>(n, 0.0), n);
        for (double u : rep.solution) CHECK(u == 0.0);
    }

    // f = sin(pi t): u = sin(pi t)/pi^2 + t/pi  (so that u'(1) = 0)
    {
        const KernelDiscretization k = brownian_kernel(n);
        std::vector<double> f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = std::sin(PI * k.grid[j]);
        const KernelOdeReport rep = kernel_solves_ode(f, n);
        CHECK(rep.interior_residual < 1e-3);
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = k.grid[j];
            worst = std::max(worst, std::abs(rep.solution[j] - (std::sin(PI * t) / (PI * PI) + t / PI)));
        }
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("paths are deterministic and vanish with zero modes", "[brownian]") {
    KLBasis basis = kl_decompose(64, 16);
    const auto a = sample_paths(basis, 3, 42);
    const auto b = sample_paths(basis, 3, 42);
    CHECK(a == b);
    const auto c = sample_paths(basis, 3, 43);
    CHECK(a != c);

    // zero eigenvalues force the zero path
    KLBasis flat = basis;
    for (double& lam : flat.eigenvalues) lam = 0.0;
    for (const auto& path : sample_paths(flat, 2, 7))
        for (double v : path) CHECK(v == 0.0);
}

TEST_CASE("sampled ensemble reproduces the covariance min(s,t)", "[brownian]") {
    const std::size_t n = 64, m = 64, paths = 20000;
    const KLBasis basis = kl_decompose(n, m);
    const auto ensemble = sample_paths(basis, paths, 1);
    const Matrix cov = empirical_covariance(ensemble);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst,
                             std::abs(std::real(cov(i, j)) - std::min(basis.grid[i], basis.grid[j])));
    CHECK(worst < 0.02);

    // variance at the last grid point is within 0.02 of min(t,t) ~ 1
    const std::size_t last = n - 1;
    CHECK(std::abs(std::real(cov(last, last)) - 1.0) < 0.02);

    // increment law: Var(B_t - B_s) = t - s
    const std::size_t s_idx = 15, t_idx = 47;
    double inc_var = 0.0;
    for (const auto& path : ensemble) {
        const double d = path[t_idx] - path[s_idx];
        inc_var += d * d;
    }
    inc_var /= static_cast<double>(paths);
    CHECK(inc_var == Catch::Approx(basis.grid[t_idx] - basis.grid[s_idx]).margin(0.02));
}
