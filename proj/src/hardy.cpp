#include "tdeg/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "tdeg/geometry.hpp"

namespace tdeg {

CMat SymbolMap::inverse_at(const CVec& z) const
{
    const CMat v = eval(z);
    if (unitary) return v.adjoint();
    return v.inverse();
}

std::size_t TruncatedBasis::count_up_to(int d) const
{
    std::size_t c = 0;
    for (const auto& a : alpha) {
        int s = 0;
        for (int v : a) s += v;
        if (s <= d) ++c;
    }
    return c;
}

double monomial_norm2(const std::vector<int>& alpha)
{
    const int n = static_cast<int>(alpha.size());
    int total = 0;
    double lg = std::lgamma(n);
    for (int a : alpha) {
        lg += std::lgamma(a + 1.0);
        total += a;
    }
    return std::exp(lg - std::lgamma(n + total));
}

TruncatedBasis build_basis(int n, int cap)
{
    if (n < 1 || n > 2) throw DomainError("build_basis: n must be 1 or 2");
    if (cap < 0 || (n == 1 && cap > 256) || (n == 2 && cap > 40)) throw DomainError("build_basis: cap out of range");
    TruncatedBasis b;
    b.n = n;
    b.cap = cap;
    for (int d = 0; d <= cap; ++d) {
        if (n == 1) {
            b.alpha.push_back({d});
        } else {
            for (int a1 = d; a1 >= 0; --a1) b.alpha.push_back({a1, d - a1});
        }
    }
    for (const auto& a : b.alpha) b.norm2.push_back(monomial_norm2(a));
    return b;
}

namespace {

int next_pow2(int v)
{
    int p = 1;
    while (p < v) p <<= 1;
    return p;
}

struct GaussLegendre01 {
    std::vector<double> x, w;  // on [0, 1]
    explicit GaussLegendre01(int m)
    {
        RMat J = RMat::Zero(m, m);
        for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
        Eigen::SelfAdjointEigenSolver<RMat> es(J);
        for (int i = 0; i < m; ++i) {
            x.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
            w.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
        }
    }
};

// Fourier coefficients of each matrix entry of `values` (one matrix per grid point).
// Result[e] is a flat coefficient array for entry e = r*dim+c.
std::vector<std::vector<cplx>> fft_1d(const std::vector<CMat>& values, int dim)
{
    const int m = static_cast<int>(values.size());
    Eigen::FFT<double> fft;
    std::vector<std::vector<cplx>> out(static_cast<std::size_t>(dim * dim));
    std::vector<cplx> in(m);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            for (int j = 0; j < m; ++j) in[j] = values[j](r, c);
            auto& o = out[static_cast<std::size_t>(r * dim + c)];
            fft.fwd(o, in);
            for (auto& v : o) v /= static_cast<double>(m);
        }
    return out;
}

// 2D forward FFT of an m x m grid, normalized by 1/m².
void fft_2d(std::vector<cplx>& grid, int m, Eigen::FFT<double>& fft)
{
    std::vector<cplx> in(m), out(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) in[j] = grid[i * m + j];
        fft.fwd(out, in);
        for (int j = 0; j < m; ++j) grid[i * m + j] = out[j];
    }
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) in[i] = grid[i * m + j];
        fft.fwd(out, in);
        for (int i = 0; i < m; ++i) grid[i * m + j] = out[i] / static_cast<double>(m * m);
    }
}

int mod(int a, int m) { return ((a % m) + m) % m; }

// Rows over `rows`, columns over `cols` (both graded bases of the same n).
CMat toeplitz_rect(const std::function<CMat(const CVec&)>& eval, int dim, const TruncatedBasis& rows,
                   const TruncatedBasis& cols, QuadratureSpec q)
{
    const int n = rows.n;
    const int maxdeg = rows.cap + cols.cap;
    const int m = q.angular > 0 ? q.angular : std::max(64, next_pow2(2 * maxdeg + 8));
    const auto nr = static_cast<Eigen::Index>(rows.size()), nc = static_cast<Eigen::Index>(cols.size());
    CMat t = CMat::Zero(nr * dim, nc * dim);

    if (n == 1) {
        std::vector<CMat> vals;
        vals.reserve(m);
        CVec z(1);
        for (int j = 0; j < m; ++j) {
            z(0) = std::polar(1.0, 2.0 * pi * j / m);
            vals.push_back(eval(z));
        }
        const auto coef = fft_1d(vals, dim);
        for (Eigen::Index a = 0; a < nr; ++a)
            for (Eigen::Index b = 0; b < nc; ++b) {
                const int k = mod(rows.alpha[a][0] - cols.alpha[b][0], m);
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c) t(a * dim + r, b * dim + c) = coef[r * dim + c][k];
            }
        return t;
    }

    if (n != 2) throw DomainError("toeplitz: n must be 1 or 2");
    const GaussLegendre01 gl(q.radial);
    Eigen::FFT<double> fft;
    const std::size_t nodes = gl.x.size();
    // coefficient grids per node and entry
    std::vector<std::vector<std::vector<cplx>>> coef(nodes);
    std::vector<double> sn(nodes), cs(nodes), wt(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double psi = 0.5 * pi * gl.x[i];
        sn[i] = std::sin(psi);
        cs[i] = std::cos(psi);
        // dt = 2 sinψ cosψ dψ, dψ weight π/2 · w
        wt[i] = 0.5 * pi * gl.w[i] * 2.0 * sn[i] * cs[i];
        std::vector<std::vector<cplx>> grids(static_cast<std::size_t>(dim * dim), std::vector<cplx>(m * m));
        CVec z(2);
        for (int j1 = 0; j1 < m; ++j1)
            for (int j2 = 0; j2 < m; ++j2) {
                z(0) = std::polar(sn[i], 2.0 * pi * j1 / m);
                z(1) = std::polar(cs[i], 2.0 * pi * j2 / m);
                const CMat v = eval(z);
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c) grids[r * dim + c][j1 * m + j2] = v(r, c);
            }
        for (auto& g : grids) fft_2d(g, m, fft);
        coef[i] = std::move(grids);
    }
    for (Eigen::Index a = 0; a < nr; ++a) {
        const auto& al = rows.alpha[a];
        for (Eigen::Index b = 0; b < nc; ++b) {
            const auto& be = cols.alpha[b];
            const int k1 = mod(al[0] - be[0], m), k2 = mod(al[1] - be[1], m);
            const double scale = 1.0 / std::sqrt(rows.norm2[a] * cols.norm2[b]);
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    cplx s = 0.0;
                    for (std::size_t i = 0; i < nodes; ++i)
                        s += wt[i] * std::pow(sn[i], al[0] + be[0]) * std::pow(cs[i], al[1] + be[1]) *
                             coef[i][r * dim + c][k1 * m + k2];
                    t(a * dim + r, b * dim + c) = s * scale;
                }
        }
    }
    return t;
}

}  // namespace

ToeplitzMatrix toeplitz_matrix(const SymbolMap& a, const TruncatedBasis& basis, QuadratureSpec q)
{
    if (a.n != basis.n) throw DomainError("toeplitz_matrix: symbol and basis dimensions differ");
    ToeplitzMatrix t{a.name, basis, a.dim, toeplitz_rect(a.eval, a.dim, basis, basis, q)};
    if (!t.matrix.allFinite()) throw DomainError("toeplitz_matrix: quadrature produced non-finite entries");
    return t;
}

CMat truncate(const ToeplitzMatrix& t, int d)
{
    const auto k = static_cast<Eigen::Index>(t.basis.count_up_to(d)) * t.dim;
    return t.matrix.topLeftCorner(k, k);
}

namespace {

void check_margin(const SymbolMap& a)
{
    const CMat pts = sample_block(a.n, 2000, 0x5eed);
    double smin = 1e300;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const CVec z = pts.row(i).transpose();
        Eigen::JacobiSVD<CMat> svd(a.eval(z));
        smin = std::min(smin, svd.singularValues().minCoeff());
    }
    if (smin <= 0.05) {
        std::ostringstream os;
        os << "symbol " << a.name << " violates the invertibility margin (min singular value " << smin << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

IndexReport fredholm_index_truncated(const SymbolMap& a, const std::vector<int>& caps_in, int power, QuadratureSpec q)
{
    if (caps_in.size() < 3) throw DomainError("fredholm_index_truncated: need at least three caps");
    if (power < 1) throw DomainError("fredholm_index_truncated: power must be positive");
    check_margin(a);
    std::vector<int> caps = caps_in;
    std::sort(caps.begin(), caps.end());
    const TruncatedBasis basis = build_basis(a.n, caps.back());
    SymbolMap inv = a;
    inv.eval = [a](const CVec& z) { return a.inverse_at(z); };
    inv.name = a.name + "^-1";
    const ToeplitzMatrix ta = toeplitz_matrix(a, basis, q);
    const ToeplitzMatrix ti = toeplitz_matrix(inv, basis, q);

    IndexReport rep;
    rep.power = power;
    rep.caps = caps;
    for (int d : caps) {
        const CMat A = truncate(ta, d), B = truncate(ti, d);
        const auto k = A.rows();
        const CMat X = CMat::Identity(k, k) - B * A;
        const CMat Y = CMat::Identity(k, k) - A * B;
        CMat xm = X, ym = Y;
        for (int p = 1; p < power; ++p) {
            xm = xm * X;
            ym = ym * Y;
        }
        const int window = d / 2;
        const auto w = static_cast<Eigen::Index>(basis.count_up_to(window)) * a.dim;
        const cplx tr = (xm - ym).diagonal().head(w).sum();
        rep.windows.push_back(window);
        rep.traces.push_back(tr.real());
        rep.imag_parts.push_back(tr.imag());
    }
    const long nearest = std::lround(rep.traces.back());
    for (std::size_t i = rep.traces.size() - 3; i < rep.traces.size(); ++i) {
        if (std::abs(rep.traces[i] - static_cast<double>(nearest)) >= 0.2) {
            std::ostringstream os;
            os << "index of " << a.name << " did not stabilize:";
            for (std::size_t j = 0; j < rep.traces.size(); ++j) os << " cap " << caps[j] << " -> " << rep.traces[j];
            throw InconclusiveError(os.str());
        }
    }
    rep.index = nearest;
    return rep;
}

namespace {

// Grid samples k(x_i, y_j) at angles 2π i/g (+ offset).
CMat kernel_grid(const CircleKernel& k, int g, double offset)
{
    CMat m(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) m(i, j) = k(2.0 * pi * (i + offset) / g, 2.0 * pi * (j + offset) / g);
    return m;
}

}  // namespace

cplx trace_product_matrix(const std::vector<CircleKernel>& ks, int grid)
{
    if (ks.empty()) throw DomainError("trace_product: empty kernel list");
    Eigen::FFT<double> fft;
    CMat prod;
    for (const auto& k : ks) {
        std::vector<cplx> g(static_cast<std::size_t>(grid) * grid);
        const CMat s = kernel_grid(k, grid, 0.0);
        // K̂[p,q] = ∫∫ k(x,y) e^{−ipx} e^{iqy}: forward in x, forward in −y
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) g[i * grid + j] = s(i, mod(-j, grid));
        fft_2d(g, grid, fft);
        CMat kh(grid, grid);
        for (int p = 0; p < grid; ++p)
            for (int qq = 0; qq < grid; ++qq) kh(p, qq) = g[p * grid + qq];
        prod = prod.size() == 0 ? kh : CMat(prod * kh);
    }
    return prod.trace();
}

cplx trace_product_grid(const std::vector<CircleKernel>& ks, int grid)
{
    if (ks.empty()) throw DomainError("trace_product: empty kernel list");
    CMat prod;
    for (const auto& k : ks) {
        const CMat s = kernel_grid(k, grid, 0.5) / static_cast<double>(grid);
        prod = prod.size() == 0 ? s : CMat(prod * s);
    }
    return prod.trace();
}

McEstimate trace_product_mc(const std::vector<CircleKernel>& ks, std::size_t samples, std::uint64_t seed)
{
    if (ks.empty() || samples < 2) throw DomainError("trace_product_mc: bad arguments");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 2.0 * pi);
    const std::size_t m = ks.size();
    std::vector<double> x(m);
    cplx sum = 0.0;
    double sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& v : x) v = ud(rng);
        cplx p = 1.0;
        for (std::size_t j = 0; j < m; ++j) p *= ks[j](x[j], x[(j + 1) % m]);
        sum += p;
        sq += std::norm(p);
    }
    McEstimate e;
    const double ns = static_cast<double>(samples);
    e.value = sum / ns;
    e.std_error = std::sqrt(std::max(0.0, sq / ns - std::norm(e.value)) / (ns - 1.0));
    e.samples = samples;
    e.seed = seed;
    return e;
}

int SingularValueReport::rank(double rel_tol) const
{
    if (s.empty() || s.front() == 0.0) return 0;
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v > rel_tol * s.front(); }));
}

namespace {

void finish_report(SingularValueReport& r, const std::vector<double>& p_values)
{
    std::sort(r.s.begin(), r.s.end(), std::greater<>());
    for (double p : p_values) {
        double t = 0.0;
        for (double v : r.s) t += std::pow(v, p);
        r.partial_sums.emplace_back(p, t);
    }
    const int usable = r.rank(1e-8);
    r.fit_first = 4;
    r.fit_last = std::min(usable, static_cast<int>(r.s.size()) / 4);
    if (r.fit_last - r.fit_first < 8) {
        r.slope = 0.0;
        return;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (int j = r.fit_first; j <= r.fit_last; ++j) {
        const double x = std::log(static_cast<double>(j));
        const double y = std::log(r.s[static_cast<std::size_t>(j - 1)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    r.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

SingularValueReport commutator_singular_values_circle(const std::function<cplx(double)>& a, double alpha, int grid,
                                                      std::vector<double> p_values)
{
    if (grid < 256 || grid % 2) throw DomainError("commutator_singular_values: rank too small for a stable fit");
    const int m = 2 * grid;
    std::vector<CMat> vals;
    vals.reserve(m);
    for (int j = 0; j < m; ++j) vals.push_back(CMat::Constant(1, 1, a(2.0 * pi * j / m)));
    const auto coef = fft_1d(vals, 1)[0];
    const int h = grid / 2;
    // modes p ∈ [−h, h); H₊: p ≥ 0, q < 0; H₋: p < 0, q ≥ 0
    CMat hp(h, h), hm(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            const int p = i, qn = -1 - j;
            hp(i, j) = coef[mod(p - qn, m)];
            hm(i, j) = coef[mod(qn - p, m)];
        }
    SingularValueReport r;
    r.alpha = alpha;
    for (const CMat* mat : {&hp, &hm}) {
        Eigen::BDCSVD<CMat> svd(*mat);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) r.s.push_back(svd.singularValues()(i));
    }
    finish_report(r, p_values);
    return r;
}

SingularValueReport commutator_singular_values_sphere(const std::function<cplx(const CVec&)>& a, double alpha,
                                                      int cap, int extra, std::vector<double> p_values)
{
    const TruncatedBasis small = build_basis(2, cap);
    if (2 * small.size() < 256) throw DomainError("commutator_singular_values: rank too small for a stable fit");
    const TruncatedBasis big = build_basis(2, cap + extra);
    const QuadratureSpec q{0, 64};
    const auto fa = [&](const CVec& z) { return CMat::Constant(1, 1, a(z)); };
    const auto fb = [&](const CVec& z) { return CMat::Constant(1, 1, std::conj(a(z))); };
    const auto fab = [&](const CVec& z) { return CMat::Constant(1, 1, std::norm(a(z))); };
    const CMat ta = toeplitz_rect(fa, 1, big, small, q);
    const CMat tb = toeplitz_rect(fb, 1, big, small, q);
    const CMat tab = toeplitz_rect(fab, 1, small, small, q);
    SingularValueReport r;
    r.alpha = alpha;
    for (const CMat* t : {&ta, &tb}) {
        CMat g = tab - t->adjoint() * (*t);
        g = 0.5 * (g + g.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMat> es(g);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            r.s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    }
    finish_report(r, p_values);
    return r;
}

}  // namespace tdeg
