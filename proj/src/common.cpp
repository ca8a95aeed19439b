#include "tdeg/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace tdeg {

Resolution resolve(double estimate, double std_error)
{
    Resolution r;
    r.nearest = std::lround(estimate);
    r.distance = std::abs(estimate - static_cast<double>(r.nearest));
    r.tolerance = std::max(3.0 * std_error, 0.15);
    r.resolved = std::isfinite(estimate) && r.distance < r.tolerance;
    return r;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t stratum)
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ fnv1a(label));
    return splitmix64(h ^ stratum);
}

unsigned worker_count()
{
    if (const char* env = std::getenv("TDEG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> extrapolation_weights(const std::vector<double>& eps, int degree, double exponent)
{
    const auto m = static_cast<Eigen::Index>(eps.size());
    if (degree < 0 || m < degree + 1) throw DomainError("extrapolation: too few eps values for fit degree");
    RMat V(m, degree + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = std::pow(eps[static_cast<std::size_t>(i)], exponent);
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            V(i, j) = p;
            p *= s;
        }
    }
    // row 0 of the pseudo-inverse gives the intercept
    const RMat pinv = (V.transpose() * V).ldlt().solve(V.transpose());
    std::vector<double> w(eps.size());
    for (Eigen::Index i = 0; i < m; ++i) w[static_cast<std::size_t>(i)] = pinv(0, i);
    return w;
}

}  // namespace tdeg
