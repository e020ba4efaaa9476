#pragma once

#include "modcurv/symbol_engine.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace modcurv::testing {

using Mat = Eigen::MatrixXcd;

// Concrete values for every atom at one point of a flat (constant-metric) chart:
// k and its first two derivatives are n×n matrices, ξ is a covector, λ a complex number.
struct MatrixModel {
    int m = 2;
    int n = 3;
    Mat k;
    std::vector<Mat> grad;               // ∂_a k
    std::vector<std::vector<Mat>> hess;  // ∂_a∂_b k, symmetric in (a,b)
    Eigen::VectorXd xi;
    Eigen::MatrixXd ginv;  // constant inverse metric
    std::complex<double> lambda{-1.0, 0.5};

    double xi2() const { return xi.dot(ginv * xi); }
    // ∂|ξ|²/∂ξ_a
    double dxi2(int a) const { return 2 * (ginv * xi)(a); }
};

// k positive definite Hermitian, derivatives Hermitian, g⁻¹ SPD (identity when flat).
MatrixModel random_model(std::uint64_t seed, int m, int n, bool flat);

// Sums every term over dummy labels; free labels are fixed by `free`.
// Curvature atoms (∇|ξ|², ∇²|ξ|², ∇³ℓ, 𝒮) vanish in a constant-metric chart.
Mat evaluate(const Expression& e, const MatrixModel& model, const std::map<int, int>& free = {});

double relative_error(const Mat& got, const Mat& want);

}  // namespace modcurv::testing
