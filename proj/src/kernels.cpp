#include "tdeg/kernels.hpp"

#include <cmath>

namespace tdeg {

void validate(const KernelSpec& spec)
{
    if (spec.n < 1) throw DomainError("KernelSpec: n must be positive");
    if (spec.eps < 0.0) throw DomainError("KernelSpec: eps must be non-negative");
    if (spec.kind == KernelKind::cauchy_circle && spec.n != 1)
        throw DomainError("KernelSpec: cauchy-circle requires n = 1");
}

cplx levi_phi(const CVec& w, const CVec& z) { return w.dot(w - z); }

double sphere_area(int n) { return 2.0 * std::pow(pi, n) / std::tgamma(n); }

double szego_constant(const KernelSpec& spec)
{
    double c = spec.measure == Measure::surface ? 1.0 / sphere_area(spec.n) : 1.0;
    if (spec.abel) c *= std::pow(1.0 + spec.eps, spec.n);
    return c;
}

cplx szego_from_inner(const KernelSpec& spec, cplx zw)
{
    return szego_constant(spec) * std::pow(1.0 - zw + spec.eps, -spec.n);
}

cplx szego_kernel(const KernelSpec& spec, const CVec& z, const CVec& w)
{
    validate(spec);
    if (z.size() != spec.n || w.size() != spec.n) throw DomainError("szego_kernel: dimension mismatch");
    const cplx zw = inner(z, w);
    if (spec.eps == 0.0 && std::abs(1.0 - zw) < 1e-14) throw DomainError("szego_kernel: singular at z = w");
    return szego_from_inner(spec, zw);
}

// The Cauchy–Leray kernel built from Φ on the ball is the Szegő kernel.
cplx hr_kernel(const KernelSpec& spec, const CVec& z, const CVec& w) { return szego_kernel(spec, z, w); }

ZonalKernel zonal_k_alpha(int n, double alpha)
{
    return [n, alpha](cplx t) {
        const double d2 = std::max(0.0, 2.0 * (1.0 - t.real()));
        return std::pow(d2, alpha / 2.0) / std::pow(std::abs(1.0 - t), n);
    };
}

ZonalKernel zonal_phi_power(double exponent)
{
    return [exponent](cplx t) { return std::pow(std::abs(1.0 - t), -exponent); };
}

namespace {

struct GaussLegendre {
    std::vector<double> x, w;  // on [-1, 1]
    explicit GaussLegendre(int m)
    {
        // Golub–Welsch
        RMat J = RMat::Zero(m, m);
        for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
        Eigen::SelfAdjointEigenSolver<RMat> es(J);
        x.resize(m);
        w.resize(m);
        for (int i = 0; i < m; ++i) {
            x[i] = es.eigenvalues()(i);
            w[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        }
    }
};

// ∫ g over the annulus-sector a ≤ ρ ≤ b of t = 1 − ρe^{iφ} inside the unit disc,
// against the density of <z,w> for w uniform on S^{2n−1} (n ≥ 2).
double disc_shell(int n, const ZonalKernel& g, double a, double b, const GaussLegendre& gl)
{
    const double dens = (n - 1) / pi;
    // φ ∈ (−π/2, π/2), ρ < 2cos φ; only φ with 2cos φ > a contribute.
    // The radial limit min(b, 2cos φ) has a kink at 2cos φ = b, so φ is split there.
    const double phimax = a >= 2.0 ? 0.0 : std::acos(a / 2.0);
    const double phib = b >= 2.0 ? 0.0 : std::acos(b / 2.0);
    const double cuts[] = {-phimax, -phib, phib, phimax};
    double total = 0.0;
    for (int piece = 0; piece < 3; ++piece) {
        const double p0 = cuts[piece], p1 = cuts[piece + 1];
        if (p1 <= p0) continue;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double phi = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * gl.x[i];
            const double wphi = 0.5 * (p1 - p0) * gl.w[i];
            const double hi = std::min(b, 2.0 * std::cos(phi));
            if (hi <= a) continue;
            const double la = std::log(a), lb = std::log(hi);
            for (std::size_t j = 0; j < gl.x.size(); ++j) {
                const double lr = 0.5 * (la + lb) + 0.5 * (lb - la) * gl.x[j];
                const double rho = std::exp(lr);
                const double wr = 0.5 * (lb - la) * gl.w[j];
                const cplx t = 1.0 - std::polar(rho, phi);
                const double m2 = std::max(0.0, 1.0 - std::norm(t));
                // area element ρ dρ dφ = ρ² d(log ρ) dφ
                total += wphi * wr * rho * rho * dens * std::pow(m2, n - 2) * g(t);
            }
        }
    }
    return total;
}

// n = 1: t = e^{iθ}, |1−t| = 2|sin(θ/2)|, dV = dθ/2π; shell in |1−t|.
double circle_shell(const ZonalKernel& g, double a, double b, const GaussLegendre& gl)
{
    if (a >= 2.0) return 0.0;
    b = std::min(b, 2.0);
    const double ta = 2.0 * std::asin(a / 2.0), tb = 2.0 * std::asin(b / 2.0);
    const double la = std::log(ta), lb = std::log(tb);
    double total = 0.0;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double th = std::exp(0.5 * (la + lb) + 0.5 * (lb - la) * gl.x[j]);
        const double wt = 0.5 * (lb - la) * gl.w[j] * th;
        total += wt * (g(std::polar(1.0, th)) + g(std::polar(1.0, -th))) / (2.0 * pi);
    }
    return total;
}

}  // namespace

std::vector<double> zonal_shells(int n, const ZonalKernel& g, int shells, int nodes)
{
    if (n < 1 || shells < 1) throw DomainError("zonal_shells: bad arguments");
    const GaussLegendre gl(nodes);
    std::vector<double> out(static_cast<std::size_t>(shells));
    for (int j = 0; j < shells; ++j) {
        const double b = j == 0 ? 2.0 : std::ldexp(1.0, -j);
        const double a = std::ldexp(1.0, -j - 1);
        if (j == 0) {
            // split the outer region so the quadrature sees smooth pieces
            double s = 0.0;
            for (double lo = 0.5; lo < 2.0; lo *= 2.0) {
                s += n == 1 ? circle_shell(g, lo, 2.0 * lo, gl) : disc_shell(n, g, lo, 2.0 * lo, gl);
            }
            out[0] = s;
        } else {
            out[static_cast<std::size_t>(j)] = n == 1 ? circle_shell(g, a, b, gl) : disc_shell(n, g, a, b, gl);
        }
    }
    return out;
}

double zonal_integral(int n, const ZonalKernel& g, int shells, int nodes)
{
    double s = 0.0;
    for (double c : zonal_shells(n, g, shells, nodes)) s += c;
    return s;
}

double phi_moment(int n, double two_c)
{
    if (two_c >= n) throw DomainError("phi_moment: divergent for 2c >= n");
    const double c = two_c / 2.0;
    return std::exp(std::lgamma(n) + std::lgamma(n - two_c) - 2.0 * std::lgamma(n - c));
}

namespace {

double shell_slope(const std::vector<double>& c, int fit)
{
    // least squares of log c_j against log 2^{−j} over the last `fit` shells
    const int m = static_cast<int>(c.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (int j = m - fit; j < m; ++j) {
        if (c[static_cast<std::size_t>(j)] <= 0.0) continue;
        const double x = -j * std::log(2.0);
        const double y = std::log(c[static_cast<std::size_t>(j)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 3) return 0.0;
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

MixedNormReport mixed_norm(int n, const ZonalKernel& k, const ZonalKernel& k_adjoint, double p, int shells)
{
    if (p <= 2.0) throw DomainError("mixed_norm: p must exceed 2");
    if (shells < 8) throw DomainError("mixed_norm: need at least 8 shells");
    MixedNormReport r;
    r.p = p;
    r.p_conj = p / (p - 1.0);
    r.shells = shells;
    const double q = r.p_conj;
    // zonal kernels: the inner L^{p'} norm does not depend on the outer variable,
    // so ||k||_{p',p} = (∫|k|^{p'} dV)^{1/p'}
    const auto powk = [&](const ZonalKernel& f) { return ZonalKernel([&f, q](cplx t) { return std::pow(f(t), q); }); };
    const auto c = zonal_shells(n, powk(k), shells);
    const auto ca = zonal_shells(n, powk(k_adjoint), shells);
    double s = 0, sa = 0;
    for (double v : c) s += v;
    for (double v : ca) sa += v;
    r.norm = std::pow(s, 1.0 / q);
    r.norm_adjoint = std::pow(sa, 1.0 / q);
    r.bound = std::sqrt(r.norm * r.norm_adjoint);
    r.shell_slope = std::min(shell_slope(c, shells / 2), shell_slope(ca, shells / 2));
    r.finite = r.shell_slope > 0.0;
    return r;
}

}  // namespace tdeg
