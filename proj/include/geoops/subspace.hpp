#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "geoops/featureset.hpp"
#include "geoops/shapes.hpp"

namespace geoops {

/// KLE eigenbasis of a design matrix: mean row, nonincreasing eigenvalues,
/// orthonormal eigenvector columns, and the dimension retained by the
/// variance threshold.
struct KleBasis {
  Eigen::RowVectorXd mean;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // D x K, orthonormal columns
  std::size_t retained_dims = 0;
  double variance_threshold = 0.95;

  double total_variance() const { return eigenvalues.sum(); }

  double retained_variance_fraction(std::size_t dims) const {
    const double total = eigenvalues.sum();
    if (total <= 0.0) return 1.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < dims && i < static_cast<std::size_t>(eigenvalues.size()); ++i)
      cum += eigenvalues(static_cast<Eigen::Index>(i));
    return cum / total;
  }
};

/// Eigendecomposition of the mean-centred sample covariance. For wide data
/// (D > N) the Gram matrix route keeps the decomposition N x N.
inline KleBasis fit_kle(const DesignMatrix& data, double threshold) {
  const Eigen::Index n = data.values.rows();
  const Eigen::Index d = data.values.cols();
  if (n < 2) throw GeoError(ErrorCode::INVALID_ARGUMENT, "need at least 2 rows");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "threshold must lie in (0, 1]");

  KleBasis basis;
  basis.variance_threshold = threshold;
  basis.mean = data.values.colwise().mean();
  const Eigen::MatrixXd centred = data.values.rowwise() - basis.mean;
  if (centred.cwiseAbs().maxCoeff() == 0.0)
    throw GeoError(ErrorCode::DEGENERATE_DATA, "all rows identical");

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (d <= n) {
    const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
      throw GeoError(ErrorCode::ILL_CONDITIONED, "covariance eigendecomposition failed");
    values = solver.eigenvalues().reverse();
    vectors = solver.eigenvectors().rowwise().reverse();
  } else {
    const Eigen::MatrixXd gram = centred * centred.transpose() / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success)
      throw GeoError(ErrorCode::ILL_CONDITIONED, "Gram eigendecomposition failed");
    const Eigen::VectorXd gram_values = solver.eigenvalues().reverse();
    const Eigen::MatrixXd gram_vectors = solver.eigenvectors().rowwise().reverse();
    const double top = std::max(gram_values(0), 0.0);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < gram_values.size(); ++i)
      if (gram_values(i) > 1e-14 * std::max(top, 1e-300)) kept.push_back(i);
    values.resize(static_cast<Eigen::Index>(kept.size()));
    vectors.resize(d, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const Eigen::Index i = kept[k];
      values(static_cast<Eigen::Index>(k)) = gram_values(i);
      const Eigen::VectorXd mapped = centred.transpose() * gram_vectors.col(i);
      vectors.col(static_cast<Eigen::Index>(k)) = mapped / mapped.norm();
    }
  }

  // Tiny negative eigenvalues are rounding debris; anything larger is a bug.
  const double clamp_floor = -1e-10 * std::max(1.0, values.size() ? values(0) : 1.0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < clamp_floor)
      throw GeoError(ErrorCode::ILL_CONDITIONED, "covariance has a significant negative eigenvalue");
    values(i) = std::max(values(i), 0.0);
  }

  basis.eigenvalues = values;
  basis.eigenvectors = vectors;

  const double total = values.sum();
  if (total <= 0.0) throw GeoError(ErrorCode::DEGENERATE_DATA, "zero total variance");
  double cum = 0.0;
  basis.retained_dims = static_cast<std::size_t>(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    cum += values(i);
    if (cum >= threshold * total * (1.0 - 1e-12)) {
      basis.retained_dims = static_cast<std::size_t>(i) + 1;
      break;
    }
  }
  return basis;
}

/// Coefficients of (row - mean) on the retained eigenvectors.
inline Eigen::VectorXd project(const KleBasis& basis, const Eigen::RowVectorXd& row) {
  if (row.size() != basis.mean.size())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "row length does not match basis");
  const Eigen::Index k = static_cast<Eigen::Index>(basis.retained_dims);
  return basis.eigenvectors.leftCols(k).transpose() * (row - basis.mean).transpose();
}

/// mean + sum latent_i * eigenvector_i.
inline Eigen::RowVectorXd reconstruct(const KleBasis& basis, const Eigen::VectorXd& latent) {
  if (latent.size() != static_cast<Eigen::Index>(basis.retained_dims))
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "latent length does not match retained dims");
  const Eigen::Index k = static_cast<Eigen::Index>(basis.retained_dims);
  return basis.mean + (basis.eigenvectors.leftCols(k) * latent).transpose();
}

/// Uniform latent sampling bounded per mode at scale * sqrt(3 lambda_i), so
/// each mode's sample variance matches lambda_i at scale 1.
inline std::vector<Eigen::VectorXd> sample_latent(const KleBasis& basis, std::size_t n,
                                                  std::uint64_t seed, double scale = 1.0) {
  if (n < 1 || !(scale > 0.0))
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "need n >= 1 and scale > 0");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  const Eigen::Index k = static_cast<Eigen::Index>(basis.retained_dims);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd latent(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double bound = scale * std::sqrt(3.0 * basis.eigenvalues(j));
      latent(j) = rng.uniform(-bound, bound);
    }
    out.push_back(std::move(latent));
  }
  return out;
}

inline constexpr double kLogDetEigenvalueFloor = 1e-12;

/// Median pairwise Euclidean distance ("median heuristic" kernel length).
inline double median_pairwise_distance(const Eigen::MatrixXd& rows) {
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(rows.rows()) * (rows.rows() - 1) / 2);
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j)
      distances.push_back((rows.row(i) - rows.row(j)).norm());
  if (distances.empty()) return 1.0;
  std::nth_element(distances.begin(), distances.begin() + distances.size() / 2, distances.end());
  return distances[distances.size() / 2];
}

/// Mean log-determinant of the RBF similarity matrix
/// k(x_i, x_j) = exp(-|x_i - x_j|^2 / (2 l^2)), eigenvalues floored at 1e-12
/// so coincident designs yield a strongly negative score instead of -inf.
inline double diversity_score(const Eigen::MatrixXd& rows, double kernel_length) {
  const Eigen::Index n = rows.rows();
  if (n < 2) throw GeoError(ErrorCode::INVALID_ARGUMENT, "need at least 2 rows");
  if (!(kernel_length > 0.0))
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "kernel length must be positive");

  Eigen::MatrixXd similarity(n, n);
  const double inv = 1.0 / (2.0 * kernel_length * kernel_length);
  for (Eigen::Index i = 0; i < n; ++i) {
    similarity(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = std::exp(-(rows.row(i) - rows.row(j)).squaredNorm() * inv);
      similarity(i, j) = k;
      similarity(j, i) = k;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(similarity);
  if (solver.info() != Eigen::Success)
    throw GeoError(ErrorCode::ILL_CONDITIONED, "similarity eigendecomposition failed");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    log_det += std::log(std::max(solver.eigenvalues()(i), kLogDetEigenvalueFloor));
  return log_det / static_cast<double>(n);
}

struct ValidityEntry {
  std::size_t index = 0;
  bool invalid = false;
  bool decode_failed = false;
  std::vector<DefectCode> reasons;
};

struct ValidityReport {
  double invalid_rate = 0.0;
  std::vector<ValidityEntry> entries;
};

/// Decodes sampled latents back to profiles and reports the invalid
/// fraction. Decode failures count as invalid, tagged DECODE_FAIL.
inline ValidityReport validity_rate(
    const std::vector<Eigen::VectorXd>& latents, const KleBasis& basis,
    const std::function<ClosedProfile2D(const Eigen::RowVectorXd&)>& decode,
    const std::function<ValidityVerdict(const ClosedProfile2D&)>& checker =
        [](const ClosedProfile2D& p) { return check_profile_validity(p); }) {
  ValidityReport report;
  report.entries.reserve(latents.size());
  std::size_t invalid_count = 0;
  for (std::size_t i = 0; i < latents.size(); ++i) {
    ValidityEntry entry;
    entry.index = i;
    try {
      const ClosedProfile2D profile = decode(reconstruct(basis, latents[i]));
      const ValidityVerdict verdict = checker(profile);
      entry.invalid = !verdict.valid;
      entry.reasons = verdict.reasons;
    } catch (const std::exception&) {
      entry.invalid = true;
      entry.decode_failed = true;
    }
    if (entry.invalid) ++invalid_count;
    report.entries.push_back(std::move(entry));
  }
  report.invalid_rate =
      latents.empty() ? 0.0 : static_cast<double>(invalid_count) / static_cast<double>(latents.size());
  return report;
}

}  // namespace geoops
