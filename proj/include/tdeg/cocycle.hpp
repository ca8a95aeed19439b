#pragma once

#include <cstdint>
#include <vector>

#include "tdeg/clifford.hpp"
#include "tdeg/common.hpp"
#include "tdeg/geometry.hpp"
#include "tdeg/hardy.hpp"
#include "tdeg/kernels.hpp"

namespace tdeg {

struct PairingConstants {
    int k = 0;
    cplx d;  // 2^{−(2k+1)}/√(2i) · Γ((2k+3)/2)^{−1}
    cplx c;  // −√(2i) 2^{2k+1} Γ((2k+3)/2)
};
PairingConstants pairing_constants(int k);

// Pfaffian of an antisymmetric matrix (pivoted skew elimination).
cplx pfaffian(CMat a);

enum class ExpansionMethod { pfaffian, matchings };

// tr_E(B(x₁)⋯B(x_{2L})) from the inner products <x_a, x_b>.
// flip_parity negates the sign of every odd matching (mutation hook for the oracle checks).
cplx clifford_word_trace(int n, const std::vector<CVec>& xs, ExpansionMethod method = ExpansionMethod::pfaffian,
                         bool flip_parity = false);

// tr_E Π_{i=0}^{m−1} (1 − u(z_{i−1})* u(z_i)), z_{−1} = z_{m−1}: direct Clifford product.
cplx nsch_direct(const GeneratorSet& g, const std::vector<CVec>& pts);
// Same trace as a sum over factor subsets of inner-product words.
cplx nsch_expansion(int n, const std::vector<CVec>& pts, ExpansionMethod method = ExpansionMethod::pfaffian,
                    bool flip_parity = false);

struct NschResult {
    cplx left, right;
    double difference = 0.0;
};
NschResult nsch_trace(const GeneratorSet& g, const std::vector<CVec>& pts,
                      ExpansionMethod method = ExpansionMethod::matchings, bool flip_parity = false);

// f̃(z₀,…,z_{2k}): the expansion evaluated at ν̃(f(z_j)).
cplx f_tilde(const TestMap& f, const std::vector<CVec>& pts, ExpansionMethod method = ExpansionMethod::pfaffian);
// tr Π(1 − g(f(z_{j−1}))* g(f(z_j))) with g the lipschitz chart symbol.
cplx f_tilde_direct(const GeneratorSet& g, const TestMap& f, const std::vector<CVec>& pts);

enum class CsSymbol { u, u_tilde, g_smooth };

// ∫ cs_{2n−1}[symbol] over S^{2n−1} by Monte-Carlo over dV.
McEstimate chern_simons_pairing(CsSymbol symbol, int n, std::size_t samples, std::uint64_t seed,
                                Cutoff cutoff = Cutoff::literal);

struct CircleOptions {
    int k = 1;
    int grid = 200;
    std::vector<double> eps{0.0};
};
// Degree of f : S¹ → S¹ from the (2k+1)-fold cocycle integral on a product grid.
McEstimate degree_circle(const TestMap& f, const CircleOptions& opt);

struct IndexOptions {
    int k = 1;
    int block = 400;       // points per factor sphere
    int replicates = 4;
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    int fit_degree = 2;    // polynomial in ε^fit_exponent
    double fit_exponent = 0.5;
    // 1: Abel kernel (1 − r<z,w>)^{−n}, degree-d multiplier r^d.
    // 2: two-scale 2(1 − r<z,w>)^{−n} − (1 − r²<z,w>)^{−n}, multiplier r^d(2 − r^d) = 1 − O((dε)²).
    int mollifier_order = 1;
    std::uint64_t seed = 1;
    double min_distance = 1e-6;
};

// ind T_a = ∫ tr Π(1 − a(z_{j−1})⁻¹a(z_j)) C(z_{j−1},z_j) dV.
McEstimate index_integral(const SymbolMap& a, const IndexOptions& opt);

struct DegreeResult {
    McEstimate via_index;   // index integral of g∘f, times ind T_u
    McEstimate via_ftilde;  // f̃ expansion on sampled tuples, times ind T_u
    long spin_index = 1;    // ind T_u from the truncated oracle
};

DegreeResult degree_integral(const TestMap& f, int n, const IndexOptions& opt, std::size_t ftilde_samples);

// The spin symbol u and the composed symbol g∘f as SymbolMaps.
SymbolMap spin_symbol(int n);
SymbolMap composed_symbol(const TestMap& f, int n);
// ind T_u from fredholm_index_truncated (n ≤ 2).
long spin_symbol_index(int n);

}  // namespace tdeg
