#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace causalq {

/// Dense matrix exponential by scaling-and-squaring with a Taylor core.
/// The argument is scaled to 1-norm <= 0.5, where 24 Taylor terms are beyond
/// double truncation error, then squared back up. Intended for the small
/// (d <= ~40) matrices of the acyclicity constraint; relative error on
/// closed-form fixtures is well under 1e-9.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Eigen::MatrixXd b = a / std::ldexp(1.0, squarings);
    const Eigen::Index d = a.rows();
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-300) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace causalq
