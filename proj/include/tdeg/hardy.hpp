#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdeg/common.hpp"

namespace tdeg {

// Evaluatable map ∂Ω → GL_dim(ℂ).
struct SymbolMap {
    std::string name;
    int n = 1;
    int dim = 1;
    std::function<CMat(const CVec&)> eval;
    std::optional<double> holder;
    bool unitary = false;  // inverse is the adjoint

    CMat inverse_at(const CVec& z) const;
};

struct TruncatedBasis {
    int n = 1;
    int cap = 0;
    std::vector<std::vector<int>> alpha;  // graded: all |α| = d precede |α| = d+1
    std::vector<double> norm2;

    std::size_t size() const { return alpha.size(); }
    // number of monomials with |α| ≤ d
    std::size_t count_up_to(int d) const;
};

TruncatedBasis build_basis(int n, int cap);
// ∫ |z^α|² dV = α!(n−1)!/(n−1+|α|)!
double monomial_norm2(const std::vector<int>& alpha);

struct QuadratureSpec {
    int angular = 0;  // FFT grid per angle; 0 picks a size from the cap
    int radial = 48;  // Gauss–Legendre nodes in ψ, t = sin²ψ (n = 2)
};

struct ToeplitzMatrix {
    std::string symbol;
    TruncatedBasis basis;
    int dim = 1;
    CMat matrix;  // (basis.size()·dim)², block (α,β) at rows α·dim, cols β·dim
};

ToeplitzMatrix toeplitz_matrix(const SymbolMap& a, const TruncatedBasis& basis, QuadratureSpec q = {});
// Leading principal truncation to degrees ≤ d.
CMat truncate(const ToeplitzMatrix& t, int d);

struct IndexReport {
    long index = 0;
    int power = 0;
    std::vector<int> caps;
    std::vector<int> windows;
    std::vector<double> traces;
    std::vector<double> imag_parts;
};

// tr_W[(1 − T_{a⁻¹}T_a)^m − (1 − T_a T_{a⁻¹})^m] on windows W = {|α| ≤ cap/2};
// throws InconclusiveError unless all caps round to the same integer within 0.2.
IndexReport fredholm_index_truncated(const SymbolMap& a, const std::vector<int>& caps, int power = 5,
                                     QuadratureSpec q = {});

// Kernels on S¹ as functions of angles (x, y); normalized measure dθ/2π.
using CircleKernel = std::function<cplx(double, double)>;

// Fourier-side trace tr(K₁⋯K_m) from 2D FFT coefficients on a grid, modes |p| < grid/2.
cplx trace_product_matrix(const std::vector<CircleKernel>& ks, int grid);
// Product-grid tuple sum ∫ Π k_j(x_j, x_{j+1}) over a midpoint grid.
cplx trace_product_grid(const std::vector<CircleKernel>& ks, int grid);
McEstimate trace_product_mc(const std::vector<CircleKernel>& ks, std::size_t samples, std::uint64_t seed);

struct SingularValueReport {
    double alpha = 0.0;
    std::vector<double> s;  // decreasing
    double slope = 0.0;     // fit of log s_j against log j
    int fit_first = 0, fit_last = 0;
    std::vector<std::pair<double, double>> partial_sums;  // (p, Σ s_j^p)
    int rank(double rel_tol = 1e-10) const;
};

// [P, a] on S¹: truncated Laurent matrix on modes [−grid/2, grid/2), P the half-line projection.
SingularValueReport commutator_singular_values_circle(const std::function<cplx(double)>& a, double alpha,
                                                      int grid = 2048, std::vector<double> p_values = {});
// [P, a] on S³ restricted to holomorphic degrees ≤ cap: union of the spectra of the Hankel parts
// of a and ā, from H*H = T_{|a|²} − T_ā P T_a with an enlarged intermediate cap.
SingularValueReport commutator_singular_values_sphere(const std::function<cplx(const CVec&)>& a, double alpha,
                                                      int cap = 16, int extra = 14,
                                                      std::vector<double> p_values = {});

}  // namespace tdeg
