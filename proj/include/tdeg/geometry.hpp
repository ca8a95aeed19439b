#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdeg/common.hpp"

namespace tdeg {

class SpherePoint {
public:
    explicit SpherePoint(CVec z, double tol = 1e-10);
    const CVec& z() const { return z_; }
    int n() const { return static_cast<int>(z_.size()); }

private:
    CVec z_;
};

struct SampleSet {
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<SpherePoint> points;
    std::size_t count() const { return points.size(); }
};

// x_{2j−1} + i x_{2j} = z_j
RVec to_real(const CVec& z);
CVec to_complex(const RVec& x);

SampleSet sample_sphere(int n, std::size_t count, std::uint64_t seed);
// Same distribution as sample_sphere, packed as rows of a count x n matrix.
CMat sample_block(int n, std::size_t count, std::uint64_t seed);

// τ(y) = (2|y|²−1, 2√(1−|y|²) y) on ℝ^{2n}, returned in complex coordinates.
CVec stereographic_tau(const RVec& y);

// Chart U = {x1 < 0} around c = (−1,0,…,0); ν drops the first real coordinate.
bool in_chart(const CVec& y);
RVec chart_nu(const CVec& y);
// τ∘ν on U, (1,0,…,0) outside.
CVec nu_tilde(const CVec& y);

enum class MapFamily { power, weierstrass, quaternion_power, chart_pullback };

struct TestMap {
    MapFamily family = MapFamily::power;
    int m = 1;
    double alpha = 1.0;
    double lambda = 0.0;
    int depth = 20;

    int domain_n() const;
    long true_degree() const;
    std::optional<double> holder_exponent() const;
    std::string name() const;
};

CVec evaluate_test_map(const TestMap& f, const CVec& z);
// W_α(θ) = Σ_{j≤J} 2^{−αj} cos(2^j θ)
double weierstrass_w(double theta, double alpha, int depth);

struct HolderFit {
    double alpha = 0.0;      // +inf for constant maps
    double residual = 0.0;
    std::size_t pairs = 0;
};

// Slope of log sup|f(z)−f(w)| against log|z−w| over dyadic distance bins 2^{−j}, j in scales.
HolderFit estimate_holder_exponent(const TestMap& f, std::size_t pairs, std::uint64_t seed,
                                   const std::vector<int>& scales);

}  // namespace tdeg
