#include "tdeg/geometry.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace tdeg {

SpherePoint::SpherePoint(CVec z, double tol) : z_(std::move(z))
{
    if (z_.size() < 1) throw DomainError("SpherePoint: empty coordinates");
    if (std::abs(z_.norm() - 1.0) > tol) throw DomainError("SpherePoint: |z| != 1");
}

RVec to_real(const CVec& z)
{
    RVec x(2 * z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        x(2 * j) = z(j).real();
        x(2 * j + 1) = z(j).imag();
    }
    return x;
}

CVec to_complex(const RVec& x)
{
    if (x.size() % 2) throw DomainError("to_complex: odd real dimension");
    CVec z(x.size() / 2);
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = cplx(x(2 * j), x(2 * j + 1));
    return z;
}

namespace {

CVec gaussian_point(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    for (;;) {
        CVec z(n);
        for (int j = 0; j < n; ++j) {
            const double re = nd(rng);
            const double im = nd(rng);
            z(j) = cplx(re, im);
        }
        const double r = z.norm();
        if (r > 1e-12) return z / r;
    }
}

}  // namespace

SampleSet sample_sphere(int n, std::size_t count, std::uint64_t seed)
{
    if (n < 1 || count < 1) throw DomainError("sample_sphere: need n >= 1 and count >= 1");
    SampleSet s{n, seed, {}};
    s.points.reserve(count);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) s.points.emplace_back(gaussian_point(n, rng));
    return s;
}

CMat sample_block(int n, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    CMat out(static_cast<Eigen::Index>(count), n);
    for (std::size_t i = 0; i < count; ++i) out.row(static_cast<Eigen::Index>(i)) = gaussian_point(n, rng).transpose();
    return out;
}

CVec stereographic_tau(const RVec& y)
{
    const double r2 = y.squaredNorm();
    if (r2 > 1.0 + 1e-12) throw DomainError("stereographic_tau: |y| > 1");
    RVec x(y.size() + 1);
    x(0) = 2.0 * r2 - 1.0;
    x.tail(y.size()) = 2.0 * std::sqrt(std::max(0.0, 1.0 - r2)) * y;
    return to_complex(x);
}

bool in_chart(const CVec& y) { return y(0).real() < 0.0; }

RVec chart_nu(const CVec& y)
{
    const RVec x = to_real(y);
    return x.tail(x.size() - 1);
}

CVec nu_tilde(const CVec& y)
{
    if (!in_chart(y)) {
        CVec e = CVec::Zero(y.size());
        e(0) = 1.0;
        return e;
    }
    RVec v = chart_nu(y);
    const double r = v.norm();
    if (r > 1.0) v /= r;
    return stereographic_tau(v);
}

int TestMap::domain_n() const
{
    switch (family) {
    case MapFamily::power:
    case MapFamily::weierstrass: return 1;
    case MapFamily::quaternion_power: return 2;
    case MapFamily::chart_pullback: return 0;  // any
    }
    return 0;
}

long TestMap::true_degree() const
{
    return family == MapFamily::chart_pullback ? 1 : m;
}

std::optional<double> TestMap::holder_exponent() const
{
    if (family == MapFamily::weierstrass && lambda != 0.0) return alpha;
    return 1.0;
}

std::string TestMap::name() const
{
    switch (family) {
    case MapFamily::power: return "power";
    case MapFamily::weierstrass: return "weierstrass";
    case MapFamily::quaternion_power: return "quaternion-power";
    case MapFamily::chart_pullback: return "chart-pullback";
    }
    return "?";
}

double weierstrass_w(double theta, double alpha, int depth)
{
    double s = 0.0, freq = 1.0;
    for (int j = 0; j <= depth; ++j, freq *= 2.0) s += std::pow(2.0, -alpha * j) * std::cos(freq * theta);
    return s;
}

namespace {

CVec quaternion_power(const CVec& z, int m)
{
    const RVec x = to_real(z);
    const double a = x(0);
    const Eigen::Vector3d v = x.tail<3>();
    const double s = v.norm();
    const double theta = std::atan2(s, a);
    RVec out(4);
    out(0) = std::cos(m * theta);
    if (s > 0.0)
        out.tail<3>() = std::sin(m * theta) / s * v;
    else
        out.tail<3>().setZero();
    return to_complex(out);
}

}  // namespace

CVec evaluate_test_map(const TestMap& f, const CVec& z)
{
    const int dn = f.domain_n();
    if (dn != 0 && z.size() != dn) throw DomainError("evaluate_test_map: dimension mismatch for " + f.name());
    switch (f.family) {
    case MapFamily::power: {
        CVec out(1);
        out(0) = std::pow(z(0), f.m);
        if (f.m < 0) out(0) = std::pow(std::conj(z(0)), -f.m);
        return out;
    }
    case MapFamily::weierstrass: {
        const double th = std::arg(z(0));
        CVec out(1);
        out(0) = std::polar(1.0, f.m * th + f.lambda * weierstrass_w(th, f.alpha, f.depth));
        return out;
    }
    case MapFamily::quaternion_power: return quaternion_power(z, f.m);
    case MapFamily::chart_pullback: return nu_tilde(z);
    }
    throw DomainError("evaluate_test_map: unknown family");
}

HolderFit estimate_holder_exponent(const TestMap& f, std::size_t pairs, std::uint64_t seed,
                                   const std::vector<int>& scales)
{
    if (pairs < 10000) throw DomainError("estimate_holder_exponent: need at least 1e4 pairs");
    if (scales.size() < 3) throw DomainError("estimate_holder_exponent: need at least three scales");
    const int n = f.domain_n() == 0 ? 2 : f.domain_n();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const std::size_t per_bin = pairs / scales.size();

    std::vector<double> lx, ly;
    bool all_zero = true;
    for (int j : scales) {
        const double delta = std::ldexp(1.0, -j);
        double sup = 0.0;
        for (std::size_t p = 0; p < per_bin; ++p) {
            RVec x(2 * n);
            for (auto& c : x) c = nd(rng);
            x.normalize();
            RVec t(2 * n);
            for (auto& c : t) c = nd(rng);
            t -= t.dot(x) * x;
            t.normalize();
            const RVec y = std::cos(delta) * x + std::sin(delta) * t;
            const CVec a = evaluate_test_map(f, to_complex(x));
            const CVec b = evaluate_test_map(f, to_complex(y));
            sup = std::max(sup, (a - b).norm());
        }
        if (sup > 0.0) {
            all_zero = false;
            lx.push_back(std::log(2.0 * std::sin(delta / 2.0)));
            ly.push_back(std::log(sup));
        }
    }
    HolderFit fit;
    fit.pairs = per_bin * scales.size();
    if (all_zero) {
        fit.alpha = std::numeric_limits<double>::infinity();
        return fit;
    }
    if (lx.size() < 3) throw DomainError("estimate_holder_exponent: degenerate bins");
    const double k = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.alpha = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (my + fit.alpha * (lx[i] - mx));
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / k);
    return fit;
}

}  // namespace tdeg
