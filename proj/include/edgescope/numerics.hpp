#pragma once

#include <Eigen/Dense>
#include <vector>

#include "edgescope/rng.hpp"

namespace edgescope {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Fill an n-by-m matrix with i.i.d. uniform draws from [lo, hi), consuming
/// the generator row by row (row-major order) so layouts are reproducible.
Matrix uniform_matrix(Rng& rng, int rows, int cols, double lo, double hi);

/// Spectral radius estimate by normalized repeated squaring (Gelfand).
///
/// Squarings are interleaved with Frobenius renormalization; the radius is
/// recovered from the accumulated log-norms as exp(sum 2^-j log n_j).  Exact
/// for normal matrices, and accurate to well under 0.1% after 20 squarings
/// for the mildly defective matrices produced here.  Returns 0 for the zero
/// matrix and for nilpotent matrices.
double spectral_radius(const Matrix& a, int squarings = 20);

/// Rescale `a` so its spectral radius equals `target`.
/// Throws std::invalid_argument when the estimated radius is zero.
Matrix rescale_to_radius(const Matrix& a, double target);

/// Ridge regression fit: minimizes |R c - g|^2 + lambda |c|^2 with
/// lambda = lambda_rel * trace(R^T R) / ncols, solved through the normal
/// equations with an LDLT factorization.
///
/// With lambda_rel == 0 a rank-deficient system is reported by throwing
/// std::runtime_error (detected through the factorization's reconstruction
/// residual).
Vector ridge_solve(const Matrix& r, const Vector& g, double lambda_rel);

/// Population (biased, 1/N) standard deviation of a sample.
double population_std(const std::vector<double>& x);

/// Population standard deviation of an Eigen vector.
double population_std(const Vector& x);

/// Spearman rank correlation of two equal-length samples; average ranks for
/// ties.  Returns 0 when either sample is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace edgescope
