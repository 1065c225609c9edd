#pragma once

#include <Eigen/Dense>
#include <vector>

#include "geoops/featureset.hpp"
#include "geoops/subspace.hpp"

namespace geoops {

/// Performance-augmented DPP kernel for a design batch:
/// L(i, j) = k(x_i, x_j) (q_i q_j)^gamma0 with an RBF similarity k.
struct DppKernel {
  Eigen::MatrixXd l;
  double gamma0 = 0.0;
  double kernel_length = 1.0;
};

inline DppKernel build_dpp_kernel(const Eigen::MatrixXd& batch, const Eigen::VectorXd& qualities,
                                  double gamma0, double kernel_length) {
  const Eigen::Index n = batch.rows();
  if (n < 2) throw GeoError(ErrorCode::INVALID_ARGUMENT, "batch needs at least 2 designs");
  if (qualities.size() != n)
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "qualities do not match batch size");
  if (!(kernel_length > 0.0))
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "kernel length must be positive");
  for (Eigen::Index i = 0; i < n; ++i)
    if (qualities(i) < 0.0)
      throw GeoError(ErrorCode::NEGATIVE_QUALITY, "qualities must be nonnegative");

  DppKernel kernel;
  kernel.gamma0 = gamma0;
  kernel.kernel_length = kernel_length;
  kernel.l.resize(n, n);
  // (q_i q_j)^g as an outer product of q_i^g keeps L exactly symmetric.
  Eigen::VectorXd weight(n);
  for (Eigen::Index i = 0; i < n; ++i) weight(i) = std::pow(qualities(i), gamma0);
  const double inv = 1.0 / (2.0 * kernel_length * kernel_length);
  for (Eigen::Index i = 0; i < n; ++i) {
    kernel.l(i, i) = weight(i) * weight(i);  // k(x, x) = 1
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double similarity = std::exp(-(batch.row(i) - batch.row(j)).squaredNorm() * inv);
      const double value = similarity * weight(i) * weight(j);
      kernel.l(i, j) = value;
      kernel.l(j, i) = value;
    }
  }
  return kernel;
}

/// DPP summand of the PaDGAN loss: -(1/n) sum log lambda_i, eigenvalues of
/// L floored at 1e-12. Sets *degenerate when the floor was hit (coincident
/// designs).
inline double dpp_loss_term(const DppKernel& kernel, bool* degenerate = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel.l);
  if (solver.info() != Eigen::Success)
    throw GeoError(ErrorCode::ILL_CONDITIONED, "DPP kernel eigendecomposition failed");
  const Eigen::Index n = kernel.l.rows();
  double sum = 0.0;
  bool hit_floor = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    double lambda = solver.eigenvalues()(i);
    if (lambda < kLogDetEigenvalueFloor) {
      lambda = kLogDetEigenvalueFloor;
      hit_floor = true;
    }
    sum += std::log(lambda);
  }
  if (degenerate) *degenerate = hit_floor;
  return -sum / static_cast<double>(n);
}

/// Standardisation constants for the quality norm, fitted over a batch of
/// GO vectors (raw moment magnitudes span many decades, so the L1 norm is
/// only meaningful on z-scored components).
struct GoQualityStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t moment_count = 0;
};

inline GoQualityStats compute_go_quality_stats(const std::vector<GoVector>& batch) {
  if (batch.empty()) throw GeoError(ErrorCode::INVALID_ARGUMENT, "empty batch");
  for (const GoVector& go : batch)
    if (!go.has_moments || !go.has_curvature || !go.has_energy)
      throw GeoError(ErrorCode::MISSING_COMPONENT,
                     "design '" + go.design_id + "' lacks m, k or ft");

  const std::size_t n_m = batch.front().moments.entries.size();
  const std::size_t dim = n_m + 2;
  GoQualityStats stats;
  stats.moment_count = n_m;
  stats.mean.assign(dim, 0.0);
  stats.stddev.assign(dim, 0.0);

  auto component = [&](const GoVector& go, std::size_t c) {
    if (c < n_m) return go.moments.entries[c].value;
    return c == n_m ? go.total_curvature : go.total_energy;
  };

  const double n = static_cast<double>(batch.size());
  for (std::size_t c = 0; c < dim; ++c) {
    double sum = 0.0;
    for (const GoVector& go : batch) sum += component(go, c);
    stats.mean[c] = sum / n;
    double ss = 0.0;
    for (const GoVector& go : batch) {
      const double d = component(go, c) - stats.mean[c];
      ss += d * d;
    }
    double sd = std::sqrt(ss / n);
    if (!(sd > 1e-30)) sd = 1.0;
    stats.stddev[c] = sd;
  }
  return stats;
}

/// q(x) = L1 norm of the standardised (m, k, ft) sub-vector.
inline double go_quality(const GoVector& go, const GoQualityStats& stats) {
  if (!go.has_moments || !go.has_curvature || !go.has_energy)
    throw GeoError(ErrorCode::MISSING_COMPONENT,
                   "design '" + go.design_id + "' lacks m, k or ft");
  if (go.moments.entries.size() != stats.moment_count)
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "moment layout does not match stats");
  double norm = 0.0;
  for (std::size_t c = 0; c < stats.moment_count; ++c)
    norm += std::abs((go.moments.entries[c].value - stats.mean[c]) / stats.stddev[c]);
  norm += std::abs((go.total_curvature - stats.mean[stats.moment_count]) /
                   stats.stddev[stats.moment_count]);
  norm += std::abs((go.total_energy - stats.mean[stats.moment_count + 1]) /
                   stats.stddev[stats.moment_count + 1]);
  return norm;
}

struct BatchScores {
  double diversity = 0.0;  // mean log det of the similarity matrix
  double quality = 0.0;    // mean supplied quality
  double novelty = 0.0;    // mean nearest-training distance
};

/// Diversity / quality / novelty of a generated batch against a training
/// set. Distances are Euclidean in whatever feature space the rows carry.
inline BatchScores batch_scores(const Eigen::MatrixXd& generated, const Eigen::MatrixXd& training,
                                const Eigen::VectorXd& qualities, double kernel_length) {
  if (generated.rows() == 0 || training.rows() == 0)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "both design sets must be non-empty");
  if (qualities.size() != generated.rows())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "qualities do not match generated batch");
  if (generated.cols() != training.cols())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "generated/training column mismatch");

  BatchScores scores;
  scores.diversity = diversity_score(generated, kernel_length);
  scores.quality = qualities.mean();
  double total = 0.0;
  for (Eigen::Index g = 0; g < generated.rows(); ++g) {
    double nearest = 1e300;
    for (Eigen::Index t = 0; t < training.rows(); ++t)
      nearest = std::min(nearest, (generated.row(g) - training.row(t)).norm());
    total += nearest;
  }
  scores.novelty = total / static_cast<double>(generated.rows());
  return scores;
}

}  // namespace geoops
