#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "magicmps/dense_tensor.hpp"

namespace magicmps {

/// Bond truncation policy: hard rank cap plus a relative discarded-weight
/// threshold. error_threshold bounds the sum of squared discarded singular
/// values divided by the total squared weight, per truncation.
struct TruncationPolicy {
  std::size_t max_rank = std::numeric_limits<std::size_t>::max();
  double error_threshold = 0.0;

  static TruncationPolicy exact() { return {}; }
  static TruncationPolicy cap(std::size_t chi, double eps = 0.0) { return {chi, eps}; }
};

struct SvdResult {
  DenseTensor u;                       // (row dims..., k) isometry
  std::vector<double> singular_values; // nonincreasing, >= 0
  DenseTensor vdag;                    // (k, col dims...) isometry
  double truncation_error = 0.0;       // discarded weight / total weight
};

/// Kept rank under `policy` for the nonincreasing spectrum `s`:
/// the smallest rank whose relative discarded squared weight is within
/// the threshold, capped by max_rank; ties at the cut (equal within
/// 1e-12 of the last kept value, relative to s[0]) are kept together
/// up to max_rank. Returns (rank, relative discarded weight).
std::pair<std::size_t, double> truncation_rank(const Eigen::VectorXd& s,
                                               const TruncationPolicy& policy);

struct MatSvd {
  MatC u;
  Eigen::VectorXd s;
  MatC vdag;
  double truncation_error = 0.0;
};

enum class SvdBackend {
  Accurate,  // Jacobi / bidiagonal divide-and-conquer
  Gram,      // eigendecomposition of the smaller Gram matrix; fast for
             // very wide or tall matrices, accurate for kept values well
             // above sqrt(machine eps) relative to the largest
  Auto,      // Gram for large strongly rectangular matrices, else Accurate
};

MatSvd svd_matrix_truncated(const MatC& m, const TruncationPolicy& policy,
                            SvdBackend backend = SvdBackend::Accurate);

/// SVD of `t` split into (row_axes index group | remaining axes), truncated
/// per `policy`. u has the row dims plus the kept bond; vdag the kept bond
/// plus the column dims.
SvdResult svd_truncated(const DenseTensor& t, const std::vector<std::size_t>& row_axes,
                        const TruncationPolicy& policy);

/// Thin QR: m = Q R with Q† Q = 1, Q is rows x k, R is k x cols, k = min(rows, cols).
std::pair<MatC, MatC> thin_qr(const MatC& m);

/// Thin RQ: m = L Q with Q Q† = 1, L is rows x k, Q is k x cols.
std::pair<MatC, MatC> thin_rq(const MatC& m);

}  // namespace magicmps
