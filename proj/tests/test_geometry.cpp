#include <doctest.h>

#include <cmath>
#include <random>
#include <limits>

#include "tdeg/geometry.hpp"

using namespace tdeg;

namespace {

CVec vec(std::initializer_list<cplx> v)
{
    CVec z(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto x : v) z(i++) = x;
    return z;
}

// chi-square statistic of values in [0,1) against a CDF, 20 equiprobable-width bins
double chi_square(const std::vector<double>& xs, const std::function<double(double)>& cdf)
{
    const int bins = 20;
    std::vector<double> count(bins, 0.0);
    for (double x : xs) count[std::min(bins - 1, static_cast<int>(x * bins))] += 1.0;
    double stat = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double e = xs.size() * (cdf((b + 1.0) / bins) - cdf(static_cast<double>(b) / bins));
        stat += (count[b] - e) * (count[b] - e) / e;
    }
    return stat;
}

}  // namespace

TEST_CASE("sphere samples: circle mean and n=2 second moment")
{
    const SampleSet s1 = sample_sphere(1, 100000, 1);
    cplx mean = 0.0;
    for (const auto& p : s1.points) mean += p.z()(0);
    mean /= static_cast<double>(s1.count());
    CHECK(std::abs(mean) < 4.0 * std::sqrt(1.0 / 100000.0));

    const CMat b = sample_block(2, 1000000, 2);
    const double m2 = b.col(0).cwiseAbs2().mean();
    CHECK(std::abs(m2 - 0.5) < 0.002);
}

TEST_CASE("sampling is deterministic")
{
    const SampleSet a = sample_sphere(2, 50, 42), b = sample_sphere(2, 50, 42);
    for (std::size_t i = 0; i < a.count(); ++i) CHECK((a.points[i].z() - b.points[i].z()).norm() == 0.0);
    const SampleSet c = sample_sphere(2, 50, 43);
    CHECK((a.points[0].z() - c.points[0].z()).norm() > 0.0);
    CHECK((sample_block(3, 20, 7) - sample_block(3, 20, 7)).norm() == 0.0);
}

TEST_CASE("sphere points are validated")
{
    CHECK_THROWS_AS(SpherePoint(vec({0.5, 0.0})), DomainError);
    CHECK_NOTHROW(SpherePoint(vec({0.6, cplx(0, 0.8)})));
}

TEST_CASE("uniformity chi-square at the 99% level")
{
    const double crit = 36.19;  // chi-square, 19 degrees of freedom
    const CMat c1 = sample_block(1, 100000, 5);
    std::vector<double> arg;
    for (Eigen::Index i = 0; i < c1.rows(); ++i) arg.push_back((std::arg(c1(i, 0)) + pi) / (2 * pi));
    CHECK(chi_square(arg, [](double x) { return x; }) < crit);
    for (int n = 2; n <= 3; ++n) {
        const CMat c = sample_block(n, 100000, 6 + n);
        std::vector<double> t;
        for (Eigen::Index i = 0; i < c.rows(); ++i) t.push_back(std::norm(c(i, 0)));
        CHECK(chi_square(t, [n](double x) { return 1.0 - std::pow(1.0 - x, n - 1); }) < crit);
    }
}

TEST_CASE("real and complex coordinates")
{
    const CVec z = vec({cplx(1, 2), cplx(3, 4)});
    const RVec x = to_real(z);
    CHECK(x(0) == 1.0);
    CHECK(x(1) == 2.0);
    CHECK(x(2) == 3.0);
    CHECK((to_complex(x) - z).norm() == 0.0);
}

TEST_CASE("tau")
{
    const CVec t0 = stereographic_tau(RVec::Zero(3));
    CHECK((t0 - vec({-1.0, 0.0})).norm() < 1e-15);
    RVec y = RVec::Zero(3);
    y(1) = 1.0;
    CHECK((stereographic_tau(y) - vec({1.0, 0.0})).norm() < 1e-15);
    CHECK_THROWS_AS(stereographic_tau(2.0 * y), DomainError);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.57, 0.57);
    for (int i = 0; i < 100; ++i) {
        RVec v(3);
        for (auto& c : v) c = u(rng);
        CHECK(std::abs(stereographic_tau(v).norm() - 1.0) < 1e-14);
        CHECK(stereographic_tau(v)(0).imag() == doctest::Approx(2.0 * std::sqrt(1.0 - v.squaredNorm()) * v(0)));
    }
}

TEST_CASE("tau is injective on the open ball")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<RVec> ys;
    for (int i = 0; i < 200; ++i) {
        RVec v(3);
        for (auto& c : v) c = u(rng);
        ys.push_back(v);
    }
    double closest = 1e9;
    for (std::size_t i = 0; i < ys.size(); ++i)
        for (std::size_t j = i + 1; j < ys.size(); ++j)
            closest = std::min(closest, (stereographic_tau(ys[i]) - stereographic_tau(ys[j])).norm());
    CHECK(closest > 0.0);
}

TEST_CASE("chart")
{
    CHECK(in_chart(vec({-1.0, 0.0})));
    CHECK_FALSE(in_chart(vec({1.0, 0.0})));
    CHECK((nu_tilde(vec({1.0, 0.0})) - vec({1.0, 0.0})).norm() == 0.0);
    CHECK((nu_tilde(vec({-1.0, 0.0})) - vec({-1.0, 0.0})).norm() < 1e-15);
    // continuity across the chart boundary
    const CVec edge = vec({cplx(-1e-9, 0.6), 0.8});
    CHECK((nu_tilde(edge) - vec({1.0, 0.0})).norm() < 1e-6);
}

TEST_CASE("test maps")
{
    TestMap id;
    const CVec z = vec({std::polar(1.0, 0.3)});
    CHECK((evaluate_test_map(id, z) - z).norm() < 1e-15);
    CHECK(id.true_degree() == 1);

    TestMap q;
    q.family = MapFamily::quaternion_power;
    q.m = 2;
    CHECK((evaluate_test_map(q, vec({1.0, 0.0})) - vec({1.0, 0.0})).norm() < 1e-15);
    // q^2 for q = (a + b i + c j + d k) with a = 0: q^2 = -|q|^2
    CHECK((evaluate_test_map(q, vec({cplx(0, 0.6), cplx(0.8, 0)})) - vec({-1.0, 0.0})).norm() < 1e-12);
    q.m = -1;
    const CVec w = vec({cplx(0.36, 0.48), cplx(0.0, 0.8)});
    CHECK((evaluate_test_map(q, w) - vec({cplx(0.36, -0.48), cplx(0.0, -0.8)})).norm() < 1e-12);

    TestMap wp;
    wp.family = MapFamily::weierstrass;
    wp.m = 2;
    wp.lambda = 0.0;
    TestMap p2;
    p2.m = 2;
    CHECK((evaluate_test_map(wp, z) - evaluate_test_map(p2, z)).norm() < 1e-14);

    CHECK_THROWS_AS(evaluate_test_map(q, z), DomainError);
}

TEST_CASE("weierstrass series")
{
    CHECK(weierstrass_w(0.0, 0.5, 0) == doctest::Approx(1.0));
    CHECK(weierstrass_w(0.0, 0.5, 2) == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0) + 0.5));
}

TEST_CASE("Hölder exponent estimates")
{
    const std::vector<int> scales{8, 10, 12, 14, 16};
    TestMap id;
    CHECK(std::abs(estimate_holder_exponent(id, 20000, 1, scales).alpha - 1.0) < 0.1);

    TestMap w;
    w.family = MapFamily::weierstrass;
    w.alpha = 0.5;
    w.lambda = 1.0;
    w.depth = 20;
    const double a = estimate_holder_exponent(w, 20000, 2, scales).alpha;
    CHECK(a >= 0.4);
    CHECK(a <= 0.6);

    TestMap c;
    c.m = 0;
    CHECK(estimate_holder_exponent(c, 20000, 3, scales).alpha == std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS(estimate_holder_exponent(id, 100, 1, scales), DomainError);
    CHECK_THROWS_AS(estimate_holder_exponent(id, 20000, 1, {3, 4}), DomainError);
}
