#pragma once

#include <vector>

#include "tdeg/common.hpp"

namespace tdeg {

// Generators of Cl(V ⊕ V̄) acting on S_V = Λ*C^n, 2^n x 2^n.
// Basis: subsets of {1..n} ordered by size, then lexicographically.
struct GeneratorSet {
    int n = 0;
    std::vector<CMat> e_plus;
    std::vector<CMat> e_minus;
    std::vector<unsigned> subsets;   // bitmask of each basis vector
    std::vector<int> even_index;     // basis positions spanning E_n

    int dim() const { return 1 << n; }
    int half_dim() const { return static_cast<int>(even_index.size()); }
    // E_n block of an operator on S_V; only meaningful for even products.
    CMat restrict_to_e(const CMat& full) const;
};

struct CliffordOp {
    int n = 0;
    CMat matrix;
};

GeneratorSet build_generators(int n);

// z_+ + z̄_- on all of S_V
CMat clifford_b(const GeneratorSet& g, const CVec& z);

// ½(e_{1,+}+e_{1,-})(z_+ + z̄_-) on E_n, for any vector z (no unit check)
CMat u_linear(const GeneratorSet& g, const CVec& z);

CliffordOp symbol_u(const GeneratorSet& g, const CVec& z);

// First column of U, i.e. U applied to the first basis vector of E_n.
CVec q_of(const CliffordOp& u);

// (−z1, z2, …) for n even, (−z̄1, z2, …) for n odd, zero padded to dim.
CVec iota(const CVec& z, int dim);

// literal: ξ₀(x) = exp(−4/x²) and ũ = ξ₀(u−1)+1. ξ₀ never exceeds e^{−1}, so this ũ is null-homotopic.
// repaired: ξ₀(x) = h(x)/(h(x)+h(1−x)) with h = exp(−4/x²), equal to 1 for x ≥ 1, and
// ũ = ξ₀(u−u₁)+u₁ with u₁ = u(1,0,…,0) = −1, so ũ = u on {Re z1 ≤ 0} and ũ = −1 near (1,0,…,0).
enum class Cutoff { literal, repaired };

// value ũ collapses to near (1,0,…,0): +1 (literal) or −1 (repaired)
double cutoff_base(Cutoff c);

double xi0(double x, Cutoff c = Cutoff::literal);
double xi0_prime(double x, Cutoff c = Cutoff::literal);
CVec cutoff_xi(const CVec& z, Cutoff c = Cutoff::literal);
CliffordOp symbol_u_tilde(const GeneratorSet& g, const CVec& z, Cutoff c = Cutoff::literal);
// literal: ξ_t(|1−Re z1|)(u(z)−1)+1 with ξ_t(x) = exp(−4(1−t)/x²); discontinuous at ((1,0,…), t = 1).
// repaired: s(u(z)+1)−1 with s = ξ₀ + t(1−ξ₀), invertible for all t.
CliffordOp homotopy_w(const GeneratorSet& g, const CVec& z, double t, Cutoff c = Cutoff::literal);

enum class SymbolVariant { lipschitz, smooth };

// g = ν̃*u (lipschitz) or g̃ = ν̃*ũ (smooth) on Y = S^{2n−1}.
CliffordOp symbol_g(const GeneratorSet& g, const CVec& y, SymbolVariant variant, Cutoff c = Cutoff::literal);

// Sign sequences in {+,−}^{2l−1} with exactly l entries equal to `sign`.
std::vector<std::vector<int>> gamma_set(int l, int sign);

}  // namespace tdeg

namespace tdeg {

// u(z) = Σ z_j P_j + z̄_j Q_j with the E_n blocks precomputed; valid for any z.
class SpinLinear {
public:
    explicit SpinLinear(const GeneratorSet& g);
    CMat operator()(const CVec& z) const;
    int n() const { return static_cast<int>(p_.size()); }
    int dim() const { return static_cast<int>(p_.front().rows()); }

private:
    std::vector<CMat> p_, q_;
};

}  // namespace tdeg
