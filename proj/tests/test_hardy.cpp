#include <doctest.h>

#include <cmath>
#include <random>

#include "tdeg/clifford.hpp"
#include "tdeg/cocycle.hpp"
#include "tdeg/geometry.hpp"
#include "tdeg/hardy.hpp"

using namespace tdeg;

namespace {

SymbolMap scalar(const std::string& name, std::function<cplx(cplx)> f)
{
    SymbolMap a;
    a.name = name;
    a.n = 1;
    a.dim = 1;
    a.eval = [f](const CVec& z) {
        CMat m(1, 1);
        m(0, 0) = f(z(0));
        return m;
    };
    a.holder = 1.0;
    a.unitary = true;
    return a;
}

SymbolMap power_symbol(int m)
{
    return scalar("z^" + std::to_string(m), [m](cplx z) { return m >= 0 ? std::pow(z, m) : std::pow(std::conj(z), -m); });
}

const std::vector<int> circle_caps{16, 24, 32};

}  // namespace

TEST_CASE("monomial norms")
{
    const TruncatedBasis b1 = build_basis(1, 10);
    for (double v : b1.norm2) CHECK(v == doctest::Approx(1.0));
    CHECK(monomial_norm2({1, 0}) == doctest::Approx(0.5));
    CHECK(monomial_norm2({1, 1}) == doctest::Approx(1.0 / 6.0));
    const TruncatedBasis b2 = build_basis(2, 4);
    CHECK(b2.size() == 15);
    CHECK(b2.count_up_to(1) == 3);
    for (std::size_t i = 1; i < b2.size(); ++i) {
        const int d0 = b2.alpha[i - 1][0] + b2.alpha[i - 1][1], d1 = b2.alpha[i][0] + b2.alpha[i][1];
        CHECK(d0 <= d1);
    }
    CHECK_THROWS_AS(build_basis(3, 4), DomainError);
    CHECK_THROWS_AS(build_basis(2, 41), DomainError);
}

TEST_CASE("Dirichlet moment by Monte-Carlo")
{
    const std::size_t count = 400000;
    const CMat w = sample_block(2, count, 21);
    double sum = 0.0, sq = 0.0;
    cplx cross = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double v = std::norm(w(i, 0) * w(i, 1));
        sum += v;
        sq += v * v;
        cross += w(i, 0) * std::conj(w(i, 1));
    }
    const double mean = sum / count, se = std::sqrt((sq / count - mean * mean) / count);
    CHECK(std::abs(mean - 1.0 / 6.0) < 4.0 * se);
    CHECK(std::abs(cross / static_cast<double>(count)) < 4.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("Toeplitz matrices of simple symbols")
{
    const TruncatedBasis b = build_basis(1, 12);
    const ToeplitzMatrix one = toeplitz_matrix(power_symbol(0), b);
    CHECK((one.matrix - CMat::Identity(13, 13)).norm() < 1e-12);
    const ToeplitzMatrix t = toeplitz_matrix(power_symbol(1), b);
    for (int i = 0; i < 13; ++i)
        for (int j = 0; j < 13; ++j) CHECK(std::abs(t.matrix(i, j) - (i == j + 1 ? 1.0 : 0.0)) < 1e-12);
    const ToeplitzMatrix ts = toeplitz_matrix(power_symbol(-1), b);
    CHECK((ts.matrix - t.matrix.adjoint()).norm() < 1e-12);

    const TruncatedBasis b2 = build_basis(2, 6);
    const ToeplitzMatrix id2 = toeplitz_matrix(spin_symbol(2), b2);
    CHECK(id2.matrix.rows() == static_cast<Eigen::Index>(2 * b2.size()));
    SymbolMap c;
    c.name = "1";
    c.n = 2;
    c.dim = 1;
    c.eval = [](const CVec&) { return CMat::Identity(1, 1); };
    c.unitary = true;
    CHECK((toeplitz_matrix(c, b2).matrix - CMat::Identity(28, 28)).norm() < 1e-10);
}

TEST_CASE("trace is cyclic on truncated Toeplitz matrices")
{
    const TruncatedBasis b = build_basis(2, 6);
    const CMat a = toeplitz_matrix(spin_symbol(2), b).matrix;
    TestMap q;
    q.family = MapFamily::quaternion_power;
    q.m = 2;
    const CMat c = toeplitz_matrix(composed_symbol(q, 2), b).matrix;
    CHECK(std::abs((a * c).trace() - (c * a).trace()) < 1e-10);
}

TEST_CASE("truncated index of power symbols")
{
    CHECK(fredholm_index_truncated(power_symbol(1), circle_caps).index == -1);
    CHECK(fredholm_index_truncated(power_symbol(-1), circle_caps).index == 1);
    CHECK(fredholm_index_truncated(power_symbol(3), circle_caps).index == -3);
    CHECK(fredholm_index_truncated(power_symbol(-2), circle_caps).index == 2);
    // ind T(ab) = ind T(a) + ind T(b)
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            CHECK(fredholm_index_truncated(power_symbol(a + b), circle_caps).index ==
                  fredholm_index_truncated(power_symbol(a), circle_caps).index +
                      fredholm_index_truncated(power_symbol(b), circle_caps).index);
}

TEST_CASE("perturbed z^2 symbol keeps index -2")
{
    TestMap w;
    w.family = MapFamily::weierstrass;
    w.m = 2;
    w.alpha = 0.6;
    w.lambda = 0.5;
    const SymbolMap a = scalar("weierstrass", [w](cplx z) {
        CVec v(1);
        v(0) = z;
        return evaluate_test_map(w, v)(0);
    });
    const IndexReport r = fredholm_index_truncated(a, {64, 96, 128});
    CHECK(r.index == -2);
}

TEST_CASE("index of the spin symbol and of g∘id")
{
    CHECK(fredholm_index_truncated(spin_symbol(1), circle_caps).index == 1);
    CHECK(fredholm_index_truncated(spin_symbol(2), {8, 10, 12}).index == 1);
    TestMap id;
    id.family = MapFamily::quaternion_power;
    const IndexReport r = fredholm_index_truncated(composed_symbol(id, 2), {12, 14, 16});
    CHECK(r.index == 1);
}

TEST_CASE("homotopy invariance along the repaired homotopy")
{
    const GeneratorSet g = build_generators(1);
    for (double t : {0.0, 0.5, 1.0}) {
        SymbolMap a;
        a.name = "w_t";
        a.n = 1;
        a.dim = 1;
        a.eval = [g, t](const CVec& z) { return homotopy_w(g, z, t, Cutoff::repaired).matrix; };
        CHECK(fredholm_index_truncated(a, {64, 96, 128}).index == 1);
    }
    // the literal cut-off symbol has index 0
    SymbolMap lit;
    lit.name = "u~";
    lit.n = 1;
    lit.dim = 1;
    lit.eval = [g](const CVec& z) { return symbol_u_tilde(g, z).matrix; };
    CHECK(fredholm_index_truncated(lit, {64, 96, 128}).index == 0);
}

TEST_CASE("tiny basis is inconclusive rather than wrong")
{
    TestMap id;
    id.family = MapFamily::quaternion_power;
    id.m = 2;
    bool inconclusive = false;
    long index = 0;
    try {
        index = fredholm_index_truncated(composed_symbol(id, 2), {2, 3, 4}).index;
    } catch (const InconclusiveError&) {
        inconclusive = true;
    }
    CHECK((inconclusive || index == 2));
}

TEST_CASE("invertibility margin is a precondition")
{
    const SymbolMap small = scalar("0.01 z", [](cplx z) { return 0.01 * z; });
    CHECK_THROWS_AS(fredholm_index_truncated(small, circle_caps), DomainError);
    CHECK_THROWS_AS(fredholm_index_truncated(power_symbol(1), {8, 16}), DomainError);
}

TEST_CASE("trace products: rank one")
{
    const auto phi = [](double x) { return cplx(1.0 + 0.5 * std::cos(x), 0.2 * std::sin(2 * x)); };
    const auto psi = [](double x) { return cplx(0.3 + std::sin(x), 0.0); };
    const CircleKernel k = [&](double x, double y) { return phi(x) * psi(y); };
    // ∫ φψ over the normalized circle
    cplx ip = 0.0;
    const int m = 4096;
    for (int i = 0; i < m; ++i) ip += phi(2 * pi * i / m) * psi(2 * pi * i / m);
    ip /= static_cast<double>(m);
    CHECK(std::abs(trace_product_matrix({k, k}, 64) - ip * ip) < 1e-10);
    CHECK(std::abs(trace_product_grid({k, k}, 64) - ip * ip) < 1e-10);
}

TEST_CASE("trace products: random trigonometric kernels")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<CircleKernel> ks;
    for (int j = 0; j < 3; ++j) {
        CMat c(5, 5);
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) c(a, b) = cplx(nd(rng), nd(rng)) / 5.0;
        ks.push_back([c](double x, double y) {
            cplx s = 0.0;
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 5; ++b) s += c(a, b) * std::polar(1.0, (a - 2) * x - (b - 2) * y);
            return s;
        });
    }
    const cplx mat = trace_product_matrix(ks, 32);
    CHECK(std::abs(trace_product_grid(ks, 32) - mat) < 1e-10);
    const McEstimate mc = trace_product_mc(ks, 1000000, 9);
    CHECK(std::abs(mc.value - mat) < std::max(1e-3, 4.0 * mc.std_error));
}

TEST_CASE("trace products: mollified Szegő kernels")
{
    const double r = 1.0 / 1.1;
    const CircleKernel k = [r](double x, double y) { return 1.0 / (1.0 - r * std::polar(1.0, x - y)); };
    const std::vector<CircleKernel> ks(3, k);
    const cplx exact = 1.0 / (1.0 - r * r * r);
    CHECK(std::abs(trace_product_matrix(ks, 256) - exact) / std::abs(exact) < 0.01);
    CHECK(std::abs(trace_product_grid(ks, 256) - exact) / std::abs(exact) < 0.01);
}

TEST_CASE("commutator singular values on the circle")
{
    const SingularValueReport c = commutator_singular_values_circle([](double) { return cplx(2.0); }, 1.0, 256);
    CHECK(c.s.front() < 1e-12);

    const auto a = [](double th) { return cplx(std::sqrt(std::abs(std::polar(1.0, th) - 1.0))); };
    const SingularValueReport h = commutator_singular_values_circle(a, 0.5, 2048, {2.0, 5.0});
    CHECK(h.slope <= -0.25 + 0.1);
    for (std::size_t j = 1; j < h.s.size(); ++j) CHECK(h.s[j] <= h.s[j - 1]);
    CHECK(h.partial_sums.size() == 2);

    for (int d = 1; d <= 4; ++d) {
        const auto trig = [d](double th) {
            cplx s = 0.0;
            for (int j = -d; j <= d; ++j) s += std::polar(1.0 / (1.0 + std::abs(j)), j * th);
            return s;
        };
        CHECK(commutator_singular_values_circle(trig, 1.0, 512).rank(1e-8) == 2 * d);
    }
    CHECK_THROWS_AS(commutator_singular_values_circle(a, 0.5, 128), DomainError);
}

TEST_CASE("commutator singular values on the sphere need rank 256")
{
    const auto a = [](const CVec& z) { return cplx(std::abs(z(0) - 1.0)); };
    CHECK_THROWS_AS(commutator_singular_values_sphere(a, 1.0, 6, 4), DomainError);
}
