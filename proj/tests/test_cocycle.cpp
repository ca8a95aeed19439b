#include <doctest.h>

#include <cmath>
#include <random>

#include "tdeg/clifford.hpp"
#include "tdeg/cocycle.hpp"
#include "tdeg/geometry.hpp"
#include "tdeg/hardy.hpp"

using namespace tdeg;

namespace {

std::vector<CVec> random_points(int n, int m, std::uint64_t seed)
{
    const CMat b = sample_block(n, static_cast<std::size_t>(m), seed);
    std::vector<CVec> pts;
    for (Eigen::Index i = 0; i < b.rows(); ++i) pts.push_back(b.row(i).transpose());
    return pts;
}

SymbolMap circle_symbol(const std::string& name, std::function<cplx(cplx)> f)
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

IndexOptions circle_options()
{
    IndexOptions o;
    o.k = 1;
    o.block = 300;
    o.replicates = 4;
    o.eps = {0.2, 0.1, 0.05, 0.025};
    o.fit_exponent = 1.0;
    return o;
}

bool within(const McEstimate& e, double target, double sigmas, double floor = 0.0)
{
    return std::abs(e.value.real() - target) < std::max(sigmas * e.std_error, floor);
}

}  // namespace

TEST_CASE("pairing constants")
{
    for (int k = 0; k <= 5; ++k) {
        const PairingConstants p = pairing_constants(k);
        CHECK(std::abs(p.d * p.c + 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(pairing_constants(-1), DomainError);
}

TEST_CASE("Pfaffian squares to the determinant")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int m : {2, 4, 6, 8}) {
        CMat a = CMat::Zero(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                a(i, j) = cplx(nd(rng), nd(rng));
                a(j, i) = -a(i, j);
            }
        const cplx pf = pfaffian(a);
        CHECK(std::abs(pf * pf - a.determinant()) < 1e-9 * std::max(1.0, std::abs(a.determinant())));
    }
    CMat j = CMat::Zero(2, 2);
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
    CHECK(std::abs(pfaffian(j) - 1.0) < 1e-15);
    CHECK(std::abs(pfaffian(CMat::Zero(3, 3))) == 0.0);
}

TEST_CASE("Clifford word traces match direct products")
{
    for (int n = 1; n <= 3; ++n) {
        const GeneratorSet g = build_generators(n);
        for (int len : {2, 4, 6}) {
            const std::vector<CVec> xs = random_points(n, len, 100 + n * 10 + len);
            CMat prod = CMat::Identity(g.dim(), g.dim());
            for (const auto& x : xs) prod = prod * clifford_b(g, x);
            const cplx direct = g.restrict_to_e(prod).trace();
            CHECK(std::abs(clifford_word_trace(n, xs) - direct) < 1e-10);
            CHECK(std::abs(clifford_word_trace(n, xs, ExpansionMethod::matchings) - direct) < 1e-10);
        }
    }
    CHECK_THROWS_AS(clifford_word_trace(2, random_points(2, 3, 1)), DomainError);
}

TEST_CASE("trace expansion: all points equal")
{
    const GeneratorSet g = build_generators(2);
    const std::vector<CVec> pts(3, random_points(2, 1, 3).front());
    const NschResult r = nsch_trace(g, pts);
    CHECK(std::abs(r.left) < 1e-12);
    CHECK(std::abs(r.right) < 1e-12);
}

TEST_CASE("trace expansion: n=1 closed form")
{
    const GeneratorSet g = build_generators(1);
    const std::vector<CVec> pts = random_points(1, 5, 4);
    cplx expect = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx prev = pts[(i + pts.size() - 1) % pts.size()](0);
        expect *= 1.0 - prev * std::conj(pts[i](0));
    }
    const NschResult r = nsch_trace(g, pts);
    CHECK(std::abs(r.left - expect) < 1e-12);
    CHECK(std::abs(r.right - expect) < 1e-12);
}

TEST_CASE("trace expansion agrees with the direct trace")
{
    for (int n = 1; n <= 3; ++n) {
        const GeneratorSet g = build_generators(n);
        double worst = 0.0, scale = 0.0;
        for (int t = 0; t < 200; ++t) {
            // fewer than 2n+1 factors give a vanishing trace for n ≥ 2
            const int m = t % 2 ? 2 * n + 1 : 3;
            const std::vector<CVec> pts = random_points(n, m, derive_seed(7, "nsch", t));
            const NschResult p = nsch_trace(g, pts, ExpansionMethod::pfaffian);
            worst = std::max(worst, p.difference);
            if (m <= 5) worst = std::max(worst, nsch_trace(g, pts).difference);
            scale = std::max(scale, std::abs(p.left));
        }
        CHECK(worst < 1e-9);
        CHECK(scale > 0.1);
    }
}

TEST_CASE("parity mutation breaks the trace expansion")
{
    const GeneratorSet g = build_generators(2);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::vector<CVec> pts = random_points(2, 5, derive_seed(8, "mut", t));
        worst = std::max(worst, nsch_trace(g, pts, ExpansionMethod::matchings, true).difference);
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("f̃ vanishes when every image is outside the chart")
{
    TestMap id;
    id.family = MapFamily::quaternion_power;
    const GeneratorSet g = build_generators(2);
    std::vector<CVec> pts = random_points(2, 3, 12);
    for (auto& p : pts) {
        p(0) = cplx(std::abs(p(0).real()) + 1e-3, p(0).imag());
        p.normalize();
    }
    CHECK(std::abs(f_tilde(id, pts)) < 1e-12);
    CHECK(std::abs(f_tilde_direct(g, id, pts)) < 1e-12);
}

TEST_CASE("f̃ matches the direct trace of the composed symbol")
{
    const GeneratorSet g = build_generators(2);
    for (int m : {1, 2, -1}) {
        TestMap f;
        f.family = MapFamily::quaternion_power;
        f.m = m;
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const std::vector<CVec> pts = random_points(2, 3, derive_seed(13, "ft", t));
            worst = std::max(worst, std::abs(f_tilde(f, pts) - f_tilde_direct(g, f, pts)));
            worst = std::max(worst, std::abs(f_tilde(f, pts, ExpansionMethod::matchings) - f_tilde_direct(g, f, pts)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("Chern–Simons pairing of the spin symbol")
{
    const McEstimate c1 = chern_simons_pairing(CsSymbol::u, 1, 20000, 1);
    CHECK(std::abs(c1.value + 1.0) < 1e-10);
    const McEstimate c2 = chern_simons_pairing(CsSymbol::u, 2, 100000, 2);
    // tr(u*du)^3 is constant on the sphere, so the estimate is exact
    CHECK(within(c2, -1.0, 4.0, 1e-10));
    CHECK(c2.std_error < 0.1);
    CHECK(std::abs(c2.value.imag()) < 4.0 * c2.std_error + 1e-12);
}

TEST_CASE("Chern–Simons pairing of the cut-off symbols")
{
    const McEstimate lit = chern_simons_pairing(CsSymbol::u_tilde, 1, 200000, 3, Cutoff::literal);
    CHECK(within(lit, 0.0, 4.0, 1e-3));
    const McEstimate rep = chern_simons_pairing(CsSymbol::u_tilde, 1, 200000, 3, Cutoff::repaired);
    CHECK(within(rep, -1.0, 4.0, 1e-3));
    const McEstimate gs = chern_simons_pairing(CsSymbol::g_smooth, 1, 200000, 4, Cutoff::repaired);
    CHECK(within(gs, -1.0, 4.0, 1e-3));
    const McEstimate g2 = chern_simons_pairing(CsSymbol::g_smooth, 2, 200000, 5, Cutoff::repaired);
    CHECK(within(g2, -1.0, 4.0, 1e-3));
    CHECK_THROWS_AS(chern_simons_pairing(CsSymbol::u, 4, 100, 1), DomainError);
}

TEST_CASE("circle degree formula")
{
    for (int m = -2; m <= 3; ++m) {
        TestMap f;
        f.m = m;
        CircleOptions o;
        o.k = 1;
        o.grid = 200;
        const McEstimate d = degree_circle(f, o);
        CHECK(std::abs(d.value.real() - m) < 1e-2);
        CHECK(std::abs(d.value.real() - m) < std::max(3.0 * d.std_error, 1e-12));
        CHECK(std::abs(d.value.imag()) < 1e-10);
    }
    TestMap w;
    w.family = MapFamily::weierstrass;
    w.alpha = 0.6;
    w.lambda = 0.5;
    CircleOptions o;
    o.k = 1;
    o.grid = 200;
    const McEstimate d = degree_circle(w, o);
    CHECK(resolve(d.value.real(), d.std_error).resolved);
    CHECK(resolve(d.value.real(), d.std_error).nearest == 1);
}

TEST_CASE("circle degree preconditions")
{
    TestMap w;
    w.family = MapFamily::weierstrass;
    w.alpha = 0.3;
    w.lambda = 0.5;
    CircleOptions o;
    o.k = 1;
    CHECK_THROWS_AS(degree_circle(w, o), DomainError);
    TestMap id;
    o.grid = 15;
    CHECK_THROWS_AS(degree_circle(id, o), DomainError);
    TestMap q;
    q.family = MapFamily::quaternion_power;
    o.grid = 64;
    CHECK_THROWS_AS(degree_circle(q, o), DomainError);
}

TEST_CASE("index integral on the circle")
{
    const McEstimate z = index_integral(circle_symbol("z", [](cplx v) { return v; }), circle_options());
    CHECK(within(z, -1.0, 3.0, 0.15));
    CHECK(std::abs(z.value.imag()) < 4.0 * z.std_error + 0.02);
    CHECK(z.extrapolated);

    SymbolMap two = circle_symbol("2", [](cplx) { return 2.0; });
    two.unitary = false;
    const McEstimate c = index_integral(two, circle_options());
    CHECK(std::abs(c.value) < 1e-12);
}

TEST_CASE("index integral invariances")
{
    const SymbolMap z = circle_symbol("z", [](cplx v) { return v; });
    const McEstimate base = index_integral(z, circle_options());

    IndexOptions o2 = circle_options();
    o2.seed = 99;
    const McEstimate reseeded = index_integral(z, o2);
    const double comb = std::hypot(base.std_error, reseeded.std_error);
    CHECK(std::abs(base.value.real() - reseeded.value.real()) < std::max(4.0 * comb, 0.15));

    const SymbolMap rotated = circle_symbol("z∘R", [](cplx v) { return std::polar(1.0, 0.7) * v; });
    const McEstimate rot = index_integral(rotated, circle_options());
    CHECK(std::abs(base.value.real() - rot.value.real()) < std::max(4.0 * std::hypot(base.std_error, rot.std_error), 0.15));

    IndexOptions k2 = circle_options();
    k2.k = 2;
    const McEstimate next = index_integral(z, k2);
    CHECK(std::abs(base.value.real() - next.value.real()) < std::max(4.0 * std::hypot(base.std_error, next.std_error), 0.15));

    IndexOptions bad = circle_options();
    bad.replicates = 1;
    CHECK_THROWS_AS(index_integral(z, bad), DomainError);
    CHECK_THROWS_AS(index_integral(circle_symbol("0.01z", [](cplx v) { return 0.01 * v; }), circle_options()),
                    DomainError);
}

TEST_CASE("index integral agrees with the truncated oracle for z^3 and z̄^2")
{
    for (int m : {3, -2}) {
        const SymbolMap a = circle_symbol("z^m", [m](cplx v) { return m > 0 ? std::pow(v, m) : std::pow(std::conj(v), -m); });
        IndexOptions o = circle_options();
        o.k = 2;
        const long oracle = fredholm_index_truncated(a, {16, 24, 32}).index;
        const McEstimate e = index_integral(a, o);
        const Resolution r = resolve(e.value.real(), e.std_error);
        CHECK(r.resolved);
        CHECK(r.nearest == oracle);
    }
}
