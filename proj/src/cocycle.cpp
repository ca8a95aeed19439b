#include "tdeg/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "tdeg/permutation.hpp"

namespace tdeg {

PairingConstants pairing_constants(int k)
{
    if (k < 0) throw DomainError("pairing_constants: k must be non-negative");
    const cplx s = std::sqrt(cplx(0.0, 2.0));
    const double g = std::tgamma((2.0 * k + 3.0) / 2.0);
    const double p = std::ldexp(1.0, 2 * k + 1);
    return {k, 1.0 / (p * s * g), -s * p * g};
}

cplx pfaffian(CMat a)
{
    const auto m = a.rows();
    if (a.cols() != m) throw DomainError("pfaffian: matrix not square");
    if (m % 2) return 0.0;
    cplx pf = 1.0;
    for (Eigen::Index k = 0; k + 1 < m; k += 2) {
        Eigen::Index kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (Eigen::Index i = k + 2; i < m; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                kp = i;
            }
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (a(k + 1, k) == cplx(0.0)) return 0.0;
        pf *= a(k, k + 1);
        if (k + 2 < m) {
            const CVec tau = a.row(k).tail(m - k - 2).transpose() / a(k, k + 1);
            const CVec col = a.col(k + 1).tail(m - k - 2);
            a.bottomRightCorner(m - k - 2, m - k - 2) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return pf;
}

namespace {

const std::vector<Matching>& matchings_cached(int slots)
{
    static std::mutex mu;
    static std::vector<std::vector<Matching>> cache;
    std::lock_guard lock(mu);
    if (cache.size() <= static_cast<std::size_t>(slots)) cache.resize(static_cast<std::size_t>(slots) + 1);
    auto& c = cache[static_cast<std::size_t>(slots)];
    if (c.empty()) c = perfect_matchings(slots);
    return c;
}

}  // namespace

cplx clifford_word_trace(int n, const std::vector<CVec>& xs, ExpansionMethod method, bool flip_parity)
{
    const auto m = static_cast<Eigen::Index>(xs.size());
    if (m % 2) throw DomainError("clifford_word_trace: odd word length");
    const double base = std::ldexp(1.0, n - 1 + static_cast<int>(m / 2));
    if (m == 0) return base;
    CMat h(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a + 1; b < m; ++b) h(a, b) = inner(xs[a], xs[b]);
    cplx total = 0.0;
    for (int r = 0; r < n; ++r) {
        const cplx c = I1 * std::polar(1.0, 2.0 * pi * r / n);
        CMat mat = CMat::Zero(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = a + 1; b < m; ++b) {
                mat(a, b) = -(h(a, b).real() + c * h(a, b).imag());
                mat(b, a) = -mat(a, b);
            }
        if (method == ExpansionMethod::pfaffian) {
            total += pfaffian(mat);
        } else {
            for (const auto& mt : matchings_cached(static_cast<int>(m))) {
                cplx t = (flip_parity && mt.sign < 0) ? 1.0 : static_cast<double>(mt.sign);
                for (std::size_t j = 0; j < mt.order.size(); j += 2) t *= mat(mt.order[j], mt.order[j + 1]);
                total += t;
            }
        }
    }
    return base * total / static_cast<double>(n);
}

cplx nsch_direct(const GeneratorSet& g, const std::vector<CVec>& pts)
{
    const std::size_t m = pts.size();
    if (m == 0) throw DomainError("nsch_direct: no points");
    std::vector<CMat> us;
    for (const auto& z : pts) us.push_back(symbol_u(g, z).matrix);
    const auto d = us.front().rows();
    CMat prod = CMat::Identity(d, d);
    for (std::size_t i = 0; i < m; ++i) {
        const CMat& prev = us[(i + m - 1) % m];
        prod = prod * (CMat::Identity(d, d) - prev.adjoint() * us[i]);
    }
    return prod.trace();
}

cplx nsch_expansion(int n, const std::vector<CVec>& pts, ExpansionMethod method, bool flip_parity)
{
    const std::size_t m = pts.size();
    if (m == 0 || m > 20) throw DomainError("nsch_expansion: bad point count");
    cplx total = 0.0;
    std::vector<CVec> word;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        word.clear();
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1u) {
                word.push_back(pts[(i + m - 1) % m]);
                word.push_back(pts[i]);
            }
        total += std::ldexp(1.0, -static_cast<int>(word.size() / 2)) *
                 clifford_word_trace(n, word, method, flip_parity);
    }
    return total;
}

NschResult nsch_trace(const GeneratorSet& g, const std::vector<CVec>& pts, ExpansionMethod method, bool flip_parity)
{
    NschResult r;
    r.left = nsch_direct(g, pts);
    r.right = nsch_expansion(g.n, pts, method, flip_parity);
    r.difference = std::abs(r.left - r.right);
    return r;
}

namespace {

std::vector<CVec> chart_images(const TestMap& f, const std::vector<CVec>& pts)
{
    std::vector<CVec> w;
    w.reserve(pts.size());
    for (const auto& z : pts) w.push_back(nu_tilde(evaluate_test_map(f, z)));
    return w;
}

}  // namespace

cplx f_tilde(const TestMap& f, const std::vector<CVec>& pts, ExpansionMethod method)
{
    const auto w = chart_images(f, pts);
    return nsch_expansion(static_cast<int>(w.front().size()), w, method);
}

cplx f_tilde_direct(const GeneratorSet& g, const TestMap& f, const std::vector<CVec>& pts)
{
    return nsch_direct(g, chart_images(f, pts));
}

// ---------------------------------------------------------------- Chern–Simons

namespace {

// Orthonormal tangent frame t₁…t_{2n−1} at x with det[x, t₁, …] > 0.
RMat tangent_frame(const RVec& x)
{
    const auto d = x.size();
    RMat q(d, d);
    q.col(0) = x;
    Eigen::Index filled = 1;
    for (Eigen::Index e = 0; e < d && filled < d; ++e) {
        RVec v = RVec::Unit(d, e);
        for (Eigen::Index j = 0; j < filled; ++j) v -= v.dot(q.col(j)) * q.col(j);
        const double nv = v.norm();
        if (nv < 0.3) continue;
        q.col(filled++) = v / nv;
    }
    if (filled < d) {
        // fall back on a full re-orthonormalization
        Eigen::HouseholderQR<RMat> qr(q.leftCols(1));
        q = qr.householderQ();
        if (q.col(0).dot(x) < 0) q.col(0) = -q.col(0);
    }
    if (q.determinant() < 0) q.col(d - 1) = -q.col(d - 1);
    return q.rightCols(d - 1);
}

struct Frame {
    CMat value;
    std::vector<CMat> deriv;  // derivative along each frame vector
};

double factorial(int k) { return std::tgamma(k + 1.0); }

cplx cs_form(const Frame& fr)
{
    const CMat inv = fr.value.inverse();
    std::vector<CMat> ms;
    for (const auto& d : fr.deriv) ms.push_back(inv * d);
    const int k = static_cast<int>(ms.size());
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    cplx total = 0.0;
    do {
        Permutation p;
        for (int v : perm) p.image.push_back(v + 1);
        CMat prod = ms[static_cast<std::size_t>(perm[0])];
        for (int i = 1; i < k; ++i) prod = prod * ms[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        total += static_cast<double>(p.sign()) * prod.trace();
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// ũ and its derivative at w along dw (both ℂⁿ), chart cutoff included.
void u_tilde_jet(const SpinLinear& u, const CVec& w, const CVec& dw, CMat& val, CMat& der, bool with_value,
                 Cutoff cutoff)
{
    const double s = 1.0 - w(0).real();
    const double x = xi0(s, cutoff);
    const CMat uw = u(w);
    const CMat base = cutoff_base(cutoff) * CMat::Identity(uw.rows(), uw.cols());
    if (with_value) val = x * (uw - base) + base;
    der = xi0_prime(s, cutoff) * (-dw(0).real()) * (uw - base) + x * u(dw);
}

}  // namespace

McEstimate chern_simons_pairing(CsSymbol symbol, int n, std::size_t samples, std::uint64_t seed, Cutoff cutoff)
{
    if (n < 1 || n > 3) throw DomainError("chern_simons_pairing: n must be in 1..3");
    if (samples < 2) throw DomainError("chern_simons_pairing: need at least two samples");
    const GeneratorSet gens = build_generators(n);
    const SpinLinear u(gens);
    const cplx coef = factorial(n - 1) / (std::pow(2.0 * pi * I1, n) * factorial(2 * n - 1)) * sphere_area(n);

    const std::size_t strata = 64;
    struct Acc {
        cplx sum = 0.0;
        double sq = 0.0;
    };
    const auto run = [&](std::size_t s) -> Acc {
        const std::size_t lo = samples * s / strata, hi = samples * (s + 1) / strata;
        std::mt19937_64 rng(derive_seed(seed, "cs", s));
        std::normal_distribution<double> nd;
        Acc acc;
        for (std::size_t i = lo; i < hi; ++i) {
            RVec x(2 * n);
            for (auto& c : x) c = nd(rng);
            x.normalize();
            const CVec z = to_complex(x);
            const RMat t = tangent_frame(x);
            Frame fr;
            cplx v = 0.0;
            bool zero = false;
            switch (symbol) {
            case CsSymbol::u:
                fr.value = u(z);
                for (Eigen::Index j = 0; j < t.cols(); ++j) fr.deriv.push_back(u(to_complex(t.col(j))));
                break;
            case CsSymbol::u_tilde: {
                CMat der;
                for (Eigen::Index j = 0; j < t.cols(); ++j) {
                    u_tilde_jet(u, z, to_complex(t.col(j)), fr.value, der, j == 0, cutoff);
                    fr.deriv.push_back(der);
                }
                zero = xi0(1.0 - z(0).real(), cutoff) == 0.0;
                break;
            }
            case CsSymbol::g_smooth: {
                if (!in_chart(z)) {
                    zero = true;
                    break;
                }
                const RVec yv = chart_nu(z);
                const double r2 = yv.squaredNorm();
                const CVec w = stereographic_tau(yv);
                if (xi0(1.0 - w(0).real(), cutoff) == 0.0 || r2 >= 1.0) {
                    zero = true;
                    break;
                }
                const double root = std::sqrt(1.0 - r2);
                CMat der;
                for (Eigen::Index j = 0; j < t.cols(); ++j) {
                    const RVec h = t.col(j).tail(2 * n - 1);
                    RVec dt(2 * n);
                    const double yh = yv.dot(h);
                    dt(0) = 4.0 * yh;
                    dt.tail(2 * n - 1) = 2.0 * root * h - 2.0 * yh / root * yv;
                    u_tilde_jet(u, w, to_complex(dt), fr.value, der, j == 0, cutoff);
                    fr.deriv.push_back(der);
                }
                break;
            }
            }
            if (!zero) v = coef * cs_form(fr);
            acc.sum += v;
            acc.sq += v.real() * v.real();
        }
        return acc;
    };
    const auto parts = parallel_map<Acc>(strata, run);
    Acc tot;
    for (const auto& p : parts) {
        tot.sum += p.sum;
        tot.sq += p.sq;
    }
    const double ns = static_cast<double>(samples);
    McEstimate e;
    e.value = tot.sum / ns;
    e.std_error = std::sqrt(std::max(0.0, tot.sq / ns - e.value.real() * e.value.real()) / (ns - 1.0));
    e.samples = samples;
    e.seed = seed;
    return e;
}

// ---------------------------------------------------------------- circle

McEstimate degree_circle(const TestMap& f, const CircleOptions& opt)
{
    if (f.domain_n() != 1) throw DomainError("degree_circle: map must be S¹ → S¹");
    if (opt.k < 1) throw DomainError("degree_circle: k must be positive");
    const double alpha = f.holder_exponent().value_or(1.0);
    if (alpha * (2 * opt.k + 1) <= 1.0) {
        std::ostringstream os;
        os << "degree_circle: α(2k+1) = " << alpha * (2 * opt.k + 1) << " <= 1, the integral may diverge";
        throw DomainError(os.str());
    }
    if (opt.grid < 16 || opt.grid % 2) throw DomainError("degree_circle: grid must be even and >= 16");
    if (opt.eps.empty()) throw DomainError("degree_circle: empty eps schedule");

    const auto trace_at = [&](int grid, double eps) {
        CVec x(grid), fx(grid);
        for (int i = 0; i < grid; ++i) {
            x(i) = std::polar(1.0, 2.0 * pi * i / grid);
            CVec z(1);
            z(0) = x(i);
            fx(i) = evaluate_test_map(f, z)(0);
        }
        const double r = 1.0 / (1.0 + eps);
        CMat m(grid, grid);
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j)
                m(i, j) = i == j ? cplx(0.0)
                                 : (1.0 - std::conj(fx(i)) * fx(j)) / (1.0 - r * x(i) * std::conj(x(j))) /
                                       static_cast<double>(grid);
        if (eps == 0.0) {
            // removable singularity: interpolate the diagonal from its neighbours
            for (int i = 0; i < grid; ++i)
                m(i, i) = 0.5 * (m(i, (i + 1) % grid) + m(i, (i + grid - 1) % grid));
        }
        CMat p = m;
        for (int j = 1; j < 2 * opt.k + 1; ++j) p = p * m;
        return -p.trace();
    };

    McEstimate e;
    e.eps = opt.eps;
    std::vector<cplx> fine, coarse;
    for (double eps : opt.eps) {
        fine.push_back(trace_at(opt.grid, eps));
        coarse.push_back(trace_at(opt.grid / 2, eps));
    }
    e.per_eps = fine;
    if (opt.eps.size() == 1) {
        e.value = fine[0];
        e.std_error = std::abs(fine[0] - coarse[0]);
    } else {
        const auto w = extrapolation_weights(opt.eps, std::min<int>(2, static_cast<int>(opt.eps.size()) - 1));
        cplx vf = 0.0, vc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            vf += w[i] * fine[i];
            vc += w[i] * coarse[i];
        }
        e.value = vf;
        e.std_error = std::abs(vf - vc);
        e.extrapolated = true;
    }
    e.samples = static_cast<std::size_t>(std::pow(static_cast<double>(opt.grid), 2 * opt.k + 1));
    return e;
}

// ---------------------------------------------------------------- index / degree integrals

namespace {

using TupleHook = std::function<cplx(const std::vector<CVec>&)>;

struct BlockRun {
    std::vector<std::vector<cplx>> direct;   // [replicate][eps]
    std::vector<std::vector<cplx>> sampled;  // [replicate][eps], empty without hook
};

void check_symbol_margin(const SymbolMap& a, std::uint64_t seed)
{
    const CMat pts = sample_block(a.n, 1000, derive_seed(seed, "margin", 0));
    double smin = 1e300;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        Eigen::JacobiSVD<CMat> svd(a.eval(pts.row(i).transpose()));
        smin = std::min(smin, svd.singularValues().minCoeff());
    }
    if (smin <= 0.05) throw DomainError("index_integral: symbol violates the invertibility margin");
}

BlockRun run_blocks(const SymbolMap& a, const IndexOptions& opt, const TupleHook& hook, std::size_t hook_samples)
{
    const int n = a.n, d = a.dim, nb = 2 * opt.k + 1;
    const Eigen::Index N = opt.block;
    const std::size_t ne = opt.eps.size();

    struct Rep {
        std::vector<cplx> direct, sampled;
    };
    const auto one = [&](std::size_t r) -> Rep {
        const std::uint64_t rs = derive_seed(opt.seed, "index-replicate", r);
        std::vector<CMat> pts(static_cast<std::size_t>(nb));
        std::vector<std::vector<CMat>> val(static_cast<std::size_t>(nb)), inv(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) {
            pts[b] = sample_block(n, static_cast<std::size_t>(N), derive_seed(rs, "block", static_cast<std::uint64_t>(b)));
            for (Eigen::Index i = 0; i < N; ++i) {
                const CVec z = pts[b].row(i).transpose();
                val[b].push_back(a.eval(z));
                inv[b].push_back(a.inverse_at(z));
            }
        }
        // 1 − a(x)⁻¹a(y), independent of eps
        std::vector<CMat> diff(static_cast<std::size_t>(nb));
        std::vector<CMat> gram(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) {
            const int c = (b + 1) % nb;
            diff[b].resize(N * d, N * d);
            for (Eigen::Index i = 0; i < N; ++i)
                for (Eigen::Index j = 0; j < N; ++j)
                    diff[b].block(i * d, j * d, d, d) = CMat::Identity(d, d) - inv[b][i] * val[c][j];
            gram[b] = pts[b] * pts[c].adjoint();
        }
        Rep out;
        const auto prop = static_cast<std::size_t>(
            std::min_element(opt.eps.begin(), opt.eps.end()) - opt.eps.begin());
        std::vector<std::vector<CMat>> cs_all(ne);
        std::vector<RMat> w(static_cast<std::size_t>(nb));
        for (std::size_t e = 0; e < ne; ++e) {
            const double rr = 1.0 / (1.0 + opt.eps[e]);
            std::vector<CMat> kb(static_cast<std::size_t>(nb));
            std::vector<CMat> cs(static_cast<std::size_t>(nb));
            for (int b = 0; b < nb; ++b) {
                CMat& c = cs[b];
                c.resize(N, N);
                for (Eigen::Index i = 0; i < N; ++i)
                    for (Eigen::Index j = 0; j < N; ++j) {
                        const cplx t = gram[b](i, j);
                        const double dist2 = 2.0 - 2.0 * t.real();
                        if (dist2 < opt.min_distance * opt.min_distance) {
                            c(i, j) = 0.0;
                            continue;
                        }
                        cplx k = std::pow(1.0 - rr * t, -n);
                        if (opt.mollifier_order == 2) k = 2.0 * k - std::pow(1.0 - rr * rr * t, -n);
                        c(i, j) = k / static_cast<double>(N);
                    }
                kb[b] = diff[b];
                for (Eigen::Index i = 0; i < N; ++i)
                    for (Eigen::Index j = 0; j < N; ++j) kb[b].block(i * d, j * d, d, d) *= c(i, j);
            }
            CMat p = kb[0];
            for (int b = 1; b < nb - 1; ++b) p = p * kb[b];
            out.direct.push_back((p.array() * kb[nb - 1].transpose().array()).sum());

            if (!hook) continue;
            cs_all[e] = cs;
            if (e != prop) continue;
            // proposal ∝ Π ‖K block‖ along the cycle at the smallest eps
            for (int b = 0; b < nb; ++b) {
                w[b].resize(N, N);
                for (Eigen::Index i = 0; i < N; ++i)
                    for (Eigen::Index j = 0; j < N; ++j) w[b](i, j) = kb[b].block(i * d, j * d, d, d).norm();
            }
        }
        if (!hook) return out;
        // one tuple sample serves every eps: f̃ does not depend on eps
        std::vector<RMat> suffix(static_cast<std::size_t>(nb));  // suffix[b] = W_b ⋯ W_{nb−1}
        suffix[nb - 1] = w[nb - 1];
        for (int b = nb - 2; b >= 1; --b) suffix[b] = w[b] * suffix[b + 1];
        const RVec start = (w[0] * suffix[1]).diagonal();
        const double z = start.sum();
        std::mt19937_64 rng(derive_seed(rs, "ftilde", 0));
        std::discrete_distribution<Eigen::Index> first(start.data(), start.data() + N);
        std::vector<double> weights(static_cast<std::size_t>(N));
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(nb));
        std::vector<CVec> tuple(static_cast<std::size_t>(nb));
        std::vector<cplx> acc(ne, 0.0);
        for (std::size_t s = 0; s < hook_samples; ++s) {
            idx[0] = first(rng);
            for (int b = 1; b < nb; ++b) {
                for (Eigen::Index j = 0; j < N; ++j) weights[j] = w[b - 1](idx[b - 1], j) * suffix[b](j, idx[0]);
                std::discrete_distribution<Eigen::Index> step(weights.begin(), weights.end());
                idx[b] = step(rng);
            }
            double wprod = 1.0;
            for (int b = 0; b < nb; ++b) {
                wprod *= w[b](idx[b], idx[(b + 1) % nb]);
                tuple[b] = pts[b].row(idx[b]).transpose();
            }
            const cplx h = hook(tuple) / wprod;
            for (std::size_t e = 0; e < ne; ++e) {
                cplx cprod = 1.0;
                for (int b = 0; b < nb; ++b) cprod *= cs_all[e][b](idx[b], idx[(b + 1) % nb]);
                acc[e] += h * cprod;
            }
        }
        for (std::size_t e = 0; e < ne; ++e) out.sampled.push_back(acc[e] * z / static_cast<double>(hook_samples));
        return out;
    };
    const auto reps = parallel_map<Rep>(static_cast<std::size_t>(opt.replicates), one);
    BlockRun br;
    for (const auto& r : reps) {
        br.direct.push_back(r.direct);
        if (hook) br.sampled.push_back(r.sampled);
    }
    return br;
}

McEstimate summarize(const std::vector<std::vector<cplx>>& vals, const IndexOptions& opt, std::size_t per_rep)
{
    const std::size_t R = vals.size(), ne = opt.eps.size();
    McEstimate e;
    e.eps = opt.eps;
    e.seed = opt.seed;
    e.samples = per_rep * R;
    e.per_eps.assign(ne, 0.0);
    const bool extrap = ne > 1;
    const auto w = extrap ? extrapolation_weights(opt.eps, opt.fit_degree, opt.fit_exponent) : std::vector<double>{1.0};
    std::vector<cplx> per;
    for (const auto& v : vals) {
        cplx x = 0.0;
        for (std::size_t i = 0; i < ne; ++i) {
            x += w[i] * v[i];
            e.per_eps[i] += v[i] / static_cast<double>(R);
        }
        per.push_back(x);
    }
    cplx mean = 0.0;
    for (const auto& x : per) mean += x;
    mean /= static_cast<double>(R);
    double var = 0.0;
    for (const auto& x : per) var += std::norm(x - mean);
    e.value = mean;
    e.std_error = R > 1 ? std::sqrt(var / static_cast<double>(R - 1) / static_cast<double>(R)) : 0.0;
    e.extrapolated = extrap;
    return e;
}

void check_options(const SymbolMap& a, const IndexOptions& opt)
{
    if (opt.k < 1) throw DomainError("index_integral: k must be positive");
    if (opt.block < 8) throw DomainError("index_integral: block too small");
    if (opt.replicates < 2) throw DomainError("index_integral: need at least two replicates");
    if (opt.eps.empty()) throw DomainError("index_integral: empty eps schedule");
    if (opt.eps.size() > 1 && static_cast<int>(opt.eps.size()) <= opt.fit_degree)
        throw DomainError("index_integral: eps schedule shorter than the fit");
    for (double e : opt.eps)
        if (e < 0.0) throw DomainError("index_integral: negative eps");
    if (opt.fit_exponent <= 0.0) throw DomainError("index_integral: fit exponent must be positive");
    if (opt.mollifier_order != 1 && opt.mollifier_order != 2)
        throw DomainError("index_integral: mollifier order must be 1 or 2");
    const double alpha = a.holder.value_or(1.0);
    if (2 * opt.k + 1 <= 2.0 * a.n / alpha) {
        std::ostringstream os;
        os << "index_integral: need 2k+1 > 2n/α, got 2k+1 = " << 2 * opt.k + 1 << ", 2n/α = " << 2.0 * a.n / alpha;
        throw DomainError(os.str());
    }
    check_symbol_margin(a, opt.seed);
}

std::size_t tuple_count(const IndexOptions& opt)
{
    return static_cast<std::size_t>(std::pow(static_cast<double>(opt.block), 2 * opt.k + 1));
}

}  // namespace

McEstimate index_integral(const SymbolMap& a, const IndexOptions& opt)
{
    check_options(a, opt);
    const BlockRun br = run_blocks(a, opt, nullptr, 0);
    return summarize(br.direct, opt, tuple_count(opt));
}

SymbolMap spin_symbol(int n)
{
    const GeneratorSet g = build_generators(n);
    const SpinLinear u(g);
    SymbolMap s;
    s.name = "u";
    s.n = n;
    s.dim = u.dim();
    s.eval = [u](const CVec& z) { return u(z); };
    s.holder = 1.0;
    s.unitary = true;
    return s;
}

SymbolMap composed_symbol(const TestMap& f, int n)
{
    if (f.domain_n() != 0 && f.domain_n() != n) throw DomainError("composed_symbol: map dimension mismatch");
    const GeneratorSet g = build_generators(n);
    const SpinLinear u(g);
    SymbolMap s;
    s.name = "g∘" + f.name();
    s.n = n;
    s.dim = u.dim();
    s.eval = [u, f](const CVec& z) { return u(nu_tilde(evaluate_test_map(f, z))); };
    s.holder = f.holder_exponent();
    s.unitary = true;
    return s;
}

long spin_symbol_index(int n)
{
    if (n < 1 || n > 2) throw DomainError("spin_symbol_index: truncated oracle covers n <= 2");
    static std::once_flag once[2];
    static long value[2];
    std::call_once(once[n - 1], [n] {
        const std::vector<int> caps = n == 1 ? std::vector<int>{8, 10, 12} : std::vector<int>{8, 10, 12};
        value[n - 1] = fredholm_index_truncated(spin_symbol(n), caps, 5).index;
    });
    return value[n - 1];
}

DegreeResult degree_integral(const TestMap& f, int n, const IndexOptions& opt, std::size_t ftilde_samples)
{
    const SymbolMap a = composed_symbol(f, n);
    check_options(a, opt);
    if (ftilde_samples < 1) throw DomainError("degree_integral: need f̃ samples");
    const TupleHook hook = [f](const std::vector<CVec>& pts) { return f_tilde(f, pts); };
    const BlockRun br = run_blocks(a, opt, hook, ftilde_samples);
    DegreeResult r;
    r.spin_index = spin_symbol_index(n);
    r.via_index = summarize(br.direct, opt, tuple_count(opt));
    r.via_ftilde = summarize(br.sampled, opt, ftilde_samples * opt.eps.size());
    for (McEstimate* e : {&r.via_index, &r.via_ftilde}) {
        e->value *= static_cast<double>(r.spin_index);
        for (auto& v : e->per_eps) v *= static_cast<double>(r.spin_index);
    }
    return r;
}

}  // namespace tdeg
