#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tdeg {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I1{0.0, 1.0};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a finite-rank computation does not stabilize.
struct InconclusiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct McEstimate {
    cplx value{};
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> eps;          // mollification schedule, empty if none
    std::vector<cplx> per_eps;        // replicate means at each eps
    bool extrapolated = false;
};

struct Resolution {
    bool resolved = false;
    long nearest = 0;
    double distance = 0.0;
    double tolerance = 0.0;
};

// |est - nearest| < max(3 se, 0.15)
Resolution resolve(double estimate, double std_error);

// SplitMix64 finalizer applied to (master, FNV-1a(label), stratum).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t stratum);

// Worker cap from TDEG_THREADS, defaulting to hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, count) on up to worker_count() threads; results stay in index order.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn);

// Least-squares polynomial in eps^exponent of the given degree, evaluated at eps = 0.
// Returns the linear weights applied to the per-eps values.
std::vector<double> extrapolation_weights(const std::vector<double>& eps, int degree, double exponent = 0.5);

}  // namespace tdeg

#include "tdeg/parallel.ipp"
