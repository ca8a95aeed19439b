#include "tdeg/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "tdeg/geometry.hpp"

namespace tdeg {

namespace {

bool graded_lex_less(unsigned a, unsigned b)
{
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    // compare element lists: lowest differing element decides
    for (unsigned bit = 1; bit; bit <<= 1) {
        const bool ia = a & bit, ib = b & bit;
        if (ia != ib) return ia;
    }
    return false;
}

}  // namespace

CMat GeneratorSet::restrict_to_e(const CMat& full) const
{
    const int h = half_dim();
    CMat out(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) out(i, j) = full(even_index[i], even_index[j]);
    return out;
}

GeneratorSet build_generators(int n)
{
    if (n < 1 || n > 6) throw DomainError("build_generators: n must be in 1..6");
    GeneratorSet g;
    g.n = n;
    const int dim = 1 << n;
    g.subsets.resize(dim);
    for (int s = 0; s < dim; ++s) g.subsets[s] = static_cast<unsigned>(s);
    std::sort(g.subsets.begin(), g.subsets.end(), graded_lex_less);
    std::vector<int> pos(dim);
    for (int i = 0; i < dim; ++i) pos[g.subsets[i]] = i;

    const double r2 = std::sqrt(2.0);
    for (int j = 0; j < n; ++j) {
        CMat cr = CMat::Zero(dim, dim), an = CMat::Zero(dim, dim);
        const unsigned bit = 1u << j;
        for (int i = 0; i < dim; ++i) {
            const unsigned s = g.subsets[i];
            const double sign = (std::popcount(s & (bit - 1)) % 2) ? -1.0 : 1.0;
            if (s & bit)
                an(pos[s ^ bit], i) = sign;
            else
                cr(pos[s | bit], i) = sign;
        }
        g.e_plus.push_back(r2 * cr);
        g.e_minus.push_back(-r2 * an);
    }
    for (int i = 0; i < dim; ++i)
        if (std::popcount(g.subsets[i]) % 2 == n % 2) g.even_index.push_back(i);
    return g;
}

CMat clifford_b(const GeneratorSet& g, const CVec& z)
{
    if (z.size() != g.n) throw DomainError("clifford_b: dimension mismatch");
    CMat b = CMat::Zero(g.dim(), g.dim());
    for (int j = 0; j < g.n; ++j) b += z(j) * g.e_plus[j] + std::conj(z(j)) * g.e_minus[j];
    return b;
}

CMat u_linear(const GeneratorSet& g, const CVec& z)
{
    const CMat a = g.e_plus[0] + g.e_minus[0];
    return g.restrict_to_e(0.5 * a * clifford_b(g, z));
}

CliffordOp symbol_u(const GeneratorSet& g, const CVec& z)
{
    if (std::abs(z.norm() - 1.0) > 1e-10) throw DomainError("symbol_u: point not on the unit sphere");
    return {g.n, u_linear(g, z)};
}

CVec q_of(const CliffordOp& u) { return u.matrix.col(0); }

CVec iota(const CVec& z, int dim)
{
    CVec out = CVec::Zero(dim);
    const auto n = z.size();
    out.head(n) = z;
    out(0) = (n % 2 == 0) ? -z(0) : -std::conj(z(0));
    return out;
}

namespace {

double bump(double x)
{
    return x < 0.19 ? 0.0 : std::exp(-4.0 / (x * x));
}

double bump_prime(double x)
{
    return x < 0.19 ? 0.0 : 8.0 / (x * x * x) * std::exp(-4.0 / (x * x));
}

}  // namespace

double cutoff_base(Cutoff c)
{
    return c == Cutoff::literal ? 1.0 : -1.0;
}

double xi0(double x, Cutoff c)
{
    x = std::abs(x);
    if (c == Cutoff::literal) return bump(x);
    if (x >= 1.0) return 1.0;
    const double a = bump(x), b = bump(1.0 - x);
    return a / (a + b);
}

double xi0_prime(double x, Cutoff c)
{
    x = std::abs(x);
    if (c == Cutoff::literal) return bump_prime(x);
    if (x >= 1.0) return 0.0;
    const double a = bump(x), b = bump(1.0 - x);
    return (bump_prime(x) * b + a * bump_prime(1.0 - x)) / ((a + b) * (a + b));
}

CVec cutoff_xi(const CVec& z, Cutoff c)
{
    const double x = xi0(std::abs(1.0 - z(0).real()), c);
    CVec out = x * z;
    out(0) += cutoff_base(c) * (x - 1.0);
    return out;
}

CliffordOp symbol_u_tilde(const GeneratorSet& g, const CVec& z, Cutoff c)
{
    if (c == Cutoff::literal) return homotopy_w(g, z, 0.0);
    const double xi = xi0(std::abs(1.0 - z(0).real()), c);
    const CMat u = symbol_u(g, z).matrix;
    const CMat base = cutoff_base(c) * CMat::Identity(u.rows(), u.cols());
    return {g.n, xi * (u - base) + base};
}

CliffordOp homotopy_w(const GeneratorSet& g, const CVec& z, double t, Cutoff c)
{
    if (c == Cutoff::repaired) {
        const double x0 = xi0(std::abs(1.0 - z(0).real()), c);
        const double s = x0 + std::clamp(t, 0.0, 1.0) * (1.0 - x0);
        const CMat u = symbol_u(g, z).matrix;
        const CMat id = CMat::Identity(u.rows(), u.cols());
        return {g.n, s * (u + id) - id};
    }
    const double x = std::abs(1.0 - z(0).real());
    double xi = 0.0;
    if (t >= 1.0)
        xi = 1.0;
    else if (t <= 0.0)
        xi = xi0(x);
    else if (x > 0.0)
        xi = std::exp(-4.0 * (1.0 - t) / (x * x));
    const CMat u = symbol_u(g, z).matrix;
    const CMat id = CMat::Identity(u.rows(), u.cols());
    return {g.n, xi * (u - id) + id};
}

CliffordOp symbol_g(const GeneratorSet& g, const CVec& y, SymbolVariant variant, Cutoff c)
{
    const CVec w = nu_tilde(y);
    if (variant == SymbolVariant::smooth) return symbol_u_tilde(g, w, c);
    return symbol_u(g, w);
}

std::vector<std::vector<int>> gamma_set(int l, int sign)
{
    if (l < 1) throw DomainError("gamma_set: l must be positive");
    const int len = 2 * l - 1;
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << len); ++mask) {
        if (std::popcount(mask) != l) continue;
        std::vector<int> k(len);
        for (int i = 0; i < len; ++i) k[i] = (mask >> i & 1u) ? sign : -sign;
        out.push_back(std::move(k));
    }
    return out;
}

}  // namespace tdeg

namespace tdeg {

SpinLinear::SpinLinear(const GeneratorSet& g)
{
    const CMat a = 0.5 * (g.e_plus[0] + g.e_minus[0]);
    for (int j = 0; j < g.n; ++j) {
        p_.push_back(g.restrict_to_e(a * g.e_plus[j]));
        q_.push_back(g.restrict_to_e(a * g.e_minus[j]));
    }
}

CMat SpinLinear::operator()(const CVec& z) const
{
    CMat out = CMat::Zero(dim(), dim());
    for (std::size_t j = 0; j < p_.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        out += z(jj) * p_[j] + std::conj(z(jj)) * q_[j];
    }
    return out;
}

}  // namespace tdeg
