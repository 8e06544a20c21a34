#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace feesh::stats {

enum class Method { Exact, NormalApprox };
std::string_view to_string(Method method);

struct TestResult {
    /// U of the first sample: pairs (a_i, b_j) with a_i > b_j, ties counting one half.
    double u{0.0};
    /// Continuity-corrected, tie-corrected z of U (signed; 0 under zero variance).
    double z{0.0};
    /// Two-sided p on [0, 1].
    double p{1.0};
    Method method{Method::NormalApprox};
};

/// Largest combined size for which the exact permutation distribution is used.
inline constexpr std::size_t exact_limit = 16;

/// Wilcoxon-Mann-Whitney rank-sum test with midranks for ties. Exact when
/// a.size() + b.size() <= exact_limit, normal approximation otherwise.
/// Throws std::invalid_argument if either sample is empty.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Forces a method. Exact requires a.size() + b.size() <= exact_limit.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Method method);

/// Two-sided p of the normal approximation, given U, sizes and the tie sum
/// sum(t^3 - t) over groups of tied values.
double normal_approx_p(double u, std::size_t n, std::size_t m, double tie_sum, double* z_out = nullptr);

/// Upper tail of the standard normal.
double normal_sf(double z);

struct Summary {
    std::size_t n{0};
    double mean{0.0};
    double min{0.0};
    double q1{0.0};
    double median{0.0};
    double q3{0.0};
    double max{0.0};
};

/// Five-number summary plus mean. Quartiles interpolate linearly between
/// order statistics (position (n - 1) * q). Throws on an empty sample.
Summary describe(std::span<const double> sample);

/// Linear-interpolation quantile of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace feesh::stats
