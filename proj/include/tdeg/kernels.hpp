#pragma once

#include <functional>
#include <vector>

#include "tdeg/common.hpp"

namespace tdeg {

enum class KernelKind { szego, henkin_ramirez, cauchy_circle };
enum class Measure { normalized, surface };

struct KernelSpec {
    int n = 1;
    KernelKind kind = KernelKind::szego;
    double eps = 0.0;
    Measure measure = Measure::normalized;
    // Multiply the mollified kernel by (1+ε)^n so that it reproduces constants:
    // (1+ε)^n (1−<z,w>+ε)^{−n} = (1 − r<z,w>)^{−n}, r = 1/(1+ε).
    bool abel = false;
};

void validate(const KernelSpec& spec);

// <z,w> = Σ z_j conj(w_j)
inline cplx inner(const CVec& z, const CVec& w) { return w.dot(z); }

// Φ(w,z) = Σ w̄_j(w_j − z_j) = 1 − <z,w> on the sphere
cplx levi_phi(const CVec& w, const CVec& z);

double sphere_area(int n);          // |S^{2n−1}| = 2π^n/(n−1)!
double szego_constant(const KernelSpec& spec);

cplx szego_kernel(const KernelSpec& spec, const CVec& z, const CVec& w);
// Kernel value from the inner product <z,w>, no validation.
cplx szego_from_inner(const KernelSpec& spec, cplx zw);
cplx hr_kernel(const KernelSpec& spec, const CVec& z, const CVec& w);

// |k(z,w)| for kernels depending only on t = <z,w>.
using ZonalKernel = std::function<double(cplx)>;

ZonalKernel zonal_k_alpha(int n, double alpha);          // |z−w|^α / |Φ|^n
ZonalKernel zonal_phi_power(double exponent);            // |Φ|^{−exponent}

// ∫ g(<z,w>) dV(w), with dyadic shells |1−t| ∈ [2^{−j−1}, 2^{−j}] for j < shells.
double zonal_integral(int n, const ZonalKernel& g, int shells, int nodes = 48);
// Contribution of each shell j = 0..shells−1 (shell 0 is everything with |1−t| ≥ 1/2).
std::vector<double> zonal_shells(int n, const ZonalKernel& g, int shells, int nodes = 48);

// ∫ |1−<z,w>|^{−2c} dV(w) = Γ(n)Γ(n−2c)/Γ(n−c)², valid for 2c < n.
double phi_moment(int n, double two_c);

struct MixedNormReport {
    double p = 0.0;
    double p_conj = 0.0;
    double norm = 0.0;          // ||k||_{p',p} at the finest resolution
    double norm_adjoint = 0.0;  // ||k*||_{p',p}
    double bound = 0.0;         // (||k|| ||k*||)^{1/2}
    int shells = 0;
    double shell_slope = 0.0;   // d log(shell mass) / d log(shell radius) over the finest shells
    bool finite = false;
};

// Mixed norms of a zonal kernel on S^{2n−1}; adjoint given separately.
MixedNormReport mixed_norm(int n, const ZonalKernel& k, const ZonalKernel& k_adjoint, double p,
                           int shells = 40);

}  // namespace tdeg
