#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoops/featureset.hpp"

namespace geoops {

/// A/B sample-matrix pair for Sobol index estimation; AB(i) is A with
/// column i replaced from B. Downstream cost is n (d + 2) evaluations.
struct SaltelliDesign {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  std::uint64_t seed = 0;

  std::size_t dims() const { return static_cast<std::size_t>(a.cols()); }
  std::size_t samples() const { return static_cast<std::size_t>(a.rows()); }

  Eigen::MatrixXd ab(std::size_t i) const {
    if (i >= dims()) throw GeoError(ErrorCode::INVALID_ARGUMENT, "column index out of range");
    Eigen::MatrixXd out = a;
    out.col(static_cast<Eigen::Index>(i)) = b.col(static_cast<Eigen::Index>(i));
    return out;
  }
};

/// Two independent LHS streams in [0,1]^d derived from one seed.
inline SaltelliDesign saltelli_design(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d < 1) throw GeoError(ErrorCode::INVALID_ARGUMENT, "d must be >= 1");
  if (n < 64) throw GeoError(ErrorCode::INVALID_ARGUMENT, "n must be >= 64");

  Rng root(seed);
  const std::uint64_t seed_a = root.next_u64();
  const std::uint64_t seed_b = root.next_u64();
  auto to_matrix = [&](const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
  };
  SaltelliDesign design;
  design.seed = seed;
  design.a = to_matrix(lhs_sample(d, n, seed_a));
  design.b = to_matrix(lhs_sample(d, n, seed_b));
  return design;
}

enum class QoiKind { SCALAR, VECTOR };

struct SobolReport {
  std::vector<double> first_order;  // clamped to [-0.05, 1.05]
  std::vector<double> total_order;  // clamped to [-0.05, 1.05]
  std::vector<double> raw_first;    // unclamped diagnostics
  std::vector<double> raw_total;
  QoiKind qoi_kind = QoiKind::SCALAR;
  double epsilon = 0.05;
  bool mask_uses_total = false;
  std::vector<char> selected_mask;

  std::size_t dims() const { return first_order.size(); }
};

namespace detail {

struct IndexAccumulator {
  double numerator_first = 0.0;  // (1/n) sum f_B (f_ABi - f_A)
  double numerator_total = 0.0;  // (1/2n) sum (f_A - f_ABi)^2
};

/// Pooled sample variance of the concatenated (f_A, f_B) evaluations.
inline double pooled_variance(const Eigen::VectorXd& f_a, const Eigen::VectorXd& f_b,
                              double& mean_out) {
  const Eigen::Index n = f_a.size();
  const double mean = (f_a.sum() + f_b.sum()) / static_cast<double>(2 * n);
  const double ss =
      (f_a.array() - mean).square().sum() + (f_b.array() - mean).square().sum();
  mean_out = mean;
  return ss / static_cast<double>(2 * n - 1);
}

inline IndexAccumulator accumulate_indices(const Eigen::VectorXd& f_a,
                                           const Eigen::VectorXd& f_b,
                                           const Eigen::VectorXd& f_ab) {
  const Eigen::Index n = f_a.size();
  IndexAccumulator acc;
  acc.numerator_first =
      (f_b.array() * (f_ab.array() - f_a.array())).sum() / static_cast<double>(n);
  acc.numerator_total =
      (f_a.array() - f_ab.array()).square().sum() / static_cast<double>(2 * n);
  return acc;
}

inline double clamp_index(double v) { return std::min(1.05, std::max(-0.05, v)); }

inline void finalize_report(SobolReport& report) {
  report.first_order.resize(report.raw_first.size());
  report.total_order.resize(report.raw_total.size());
  for (std::size_t i = 0; i < report.raw_first.size(); ++i) {
    report.first_order[i] = clamp_index(report.raw_first[i]);
    report.total_order[i] = clamp_index(report.raw_total[i]);
  }
  report.selected_mask.resize(report.dims());
  for (std::size_t i = 0; i < report.dims(); ++i) {
    const double value = report.mask_uses_total ? report.total_order[i] : report.first_order[i];
    report.selected_mask[i] = value >= report.epsilon ? 1 : 0;
  }
}

}  // namespace detail

/// Saltelli first-order and Jansen total-order estimators for a scalar QoI.
inline SobolReport sobol_indices_scalar(const Eigen::VectorXd& f_a, const Eigen::VectorXd& f_b,
                                        const std::vector<Eigen::VectorXd>& f_ab) {
  const Eigen::Index n = f_a.size();
  if (f_b.size() != n) throw GeoError(ErrorCode::DIMENSION_MISMATCH, "f_A/f_B length mismatch");
  for (const auto& column : f_ab)
    if (column.size() != n) throw GeoError(ErrorCode::DIMENSION_MISMATCH, "f_ABi length mismatch");
  if (!f_a.allFinite() || !f_b.allFinite())
    throw GeoError(ErrorCode::NAN_INPUT, "non-finite evaluations");

  double mean = 0.0;
  const double variance = detail::pooled_variance(f_a, f_b, mean);
  if (variance <= 1e-14 * mean * mean)
    throw GeoError(ErrorCode::ZERO_VARIANCE, "QoI variance vanishes");

  SobolReport report;
  report.qoi_kind = QoiKind::SCALAR;
  for (const auto& column : f_ab) {
    const detail::IndexAccumulator acc = detail::accumulate_indices(f_a, f_b, column);
    report.raw_first.push_back(acc.numerator_first / variance);
    report.raw_total.push_back(acc.numerator_total / variance);
  }
  detail::finalize_report(report);
  return report;
}

/// Generalised indices for a vector QoI: per-output numerators and variances
/// summed over outputs (trace of the covariance decomposition). Columns are
/// expected pre-standardised so no output dominates the trace.
inline SobolReport sobol_indices_vector(const Eigen::MatrixXd& f_a, const Eigen::MatrixXd& f_b,
                                        const std::vector<Eigen::MatrixXd>& f_ab) {
  const Eigen::Index n = f_a.rows();
  const Eigen::Index q = f_a.cols();
  if (f_b.rows() != n || f_b.cols() != q)
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "F_A/F_B shape mismatch");
  for (const auto& m : f_ab)
    if (m.rows() != n || m.cols() != q)
      throw GeoError(ErrorCode::DIMENSION_MISMATCH, "F_ABi shape mismatch");
  if (!f_a.allFinite() || !f_b.allFinite())
    throw GeoError(ErrorCode::NAN_INPUT, "non-finite evaluations");

  std::vector<double> variances(static_cast<std::size_t>(q));
  double trace = 0.0;
  for (Eigen::Index c = 0; c < q; ++c) {
    double mean = 0.0;
    variances[static_cast<std::size_t>(c)] = detail::pooled_variance(f_a.col(c), f_b.col(c), mean);
    trace += variances[static_cast<std::size_t>(c)];
  }
  if (trace <= 1e-14) throw GeoError(ErrorCode::ZERO_VARIANCE, "total output variance vanishes");

  SobolReport report;
  report.qoi_kind = q == 1 ? QoiKind::SCALAR : QoiKind::VECTOR;
  for (const auto& m : f_ab) {
    double num_first = 0.0, num_total = 0.0;
    for (Eigen::Index c = 0; c < q; ++c) {
      const detail::IndexAccumulator acc =
          detail::accumulate_indices(f_a.col(c), f_b.col(c), m.col(c));
      num_first += acc.numerator_first;
      num_total += acc.numerator_total;
    }
    report.raw_first.push_back(num_first / trace);
    report.raw_total.push_back(num_total / trace);
  }
  detail::finalize_report(report);
  return report;
}

/// Threshold mask over the chosen index family (clamped values); the
/// complement is the kept-fixed parameter set.
inline std::vector<char> select_features(const SobolReport& report, double epsilon,
                                         bool use_total = false) {
  std::vector<char> mask(report.dims());
  for (std::size_t i = 0; i < report.dims(); ++i) {
    const double value = use_total ? report.total_order[i] : report.first_order[i];
    mask[i] = value >= epsilon ? 1 : 0;
  }
  return mask;
}

/// Re-thresholds the stored mask in place, keeping the report invariant.
inline void apply_threshold(SobolReport& report, double epsilon, bool use_total = false) {
  report.epsilon = epsilon;
  report.mask_uses_total = use_total;
  report.selected_mask = select_features(report, epsilon, use_total);
}

struct IndexComparison {
  std::optional<double> cosine;  // empty when either vector is all zero
  double mse = 0.0;
};

/// Cosine similarity and mean squared difference between two index vectors
/// (masks compare as 0/1 vectors). Cosine is undefined, not zero, when
/// either vector vanishes.
inline IndexComparison compare_index_vectors(const std::vector<double>& a,
                                             const std::vector<double>& b) {
  if (a.size() != b.size())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "index vectors differ in length");
  if (a.empty()) throw GeoError(ErrorCode::INVALID_ARGUMENT, "empty index vectors");
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0, mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
    const double diff = a[i] - b[i];
    mse += diff * diff;
  }
  IndexComparison out;
  out.mse = mse / static_cast<double>(a.size());
  if (norm_a > 0.0 && norm_b > 0.0) out.cosine = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return out;
}

/// Result of running one Saltelli design through a shape generator with the
/// GO components standing in for performance labels.
struct GoStudyResult {
  std::map<std::string, SobolReport> reports;  // keys m, k, ft, m+k, m+ft, k+ft, m+k+ft
  std::size_t excluded_rows = 0;
  std::size_t retained_rows = 0;
};

/// Evaluates the full A/B/AB_i design once, computes per-design GO
/// components, and produces one report per GO combination. Rows whose
/// designs fail to generate or validate anywhere in the pairing are dropped
/// from all matrices (pairwise exclusion). Rows evaluate in parallel under
/// `jobs`; all writes are slot-indexed and reductions sequential, so the
/// result is identical for any worker count.
inline GoStudyResult go_sensitivity_study(
    const std::function<ClosedProfile2D(const std::vector<double>&)>& generator,
    const GoConfig& config, std::size_t d, std::size_t n, std::uint64_t seed,
    std::size_t jobs = 1) {
  const SaltelliDesign design = saltelli_design(d, n, seed);

  struct Components {
    Eigen::VectorXd moments;
    double curvature = 0.0;
    double energy = 0.0;
  };

  auto evaluate = [&](const Eigen::MatrixXd& matrix, Eigen::Index row,
                      Components& out) -> bool {
    std::vector<double> params(d);
    for (std::size_t c = 0; c < d; ++c)
      params[c] = matrix(row, static_cast<Eigen::Index>(c));
    try {
      const ClosedProfile2D profile = generator(params);
      if (!check_profile_validity(profile).valid) return false;
      const MomentVector mv = detail::apply_variant(moments_2d(profile, config.moment_order_2d),
                                                    config.moment_variant);
      out.moments.resize(static_cast<Eigen::Index>(mv.entries.size()));
      for (std::size_t i = 0; i < mv.entries.size(); ++i)
        out.moments(static_cast<Eigen::Index>(i)) = mv.entries[i].value;
      out.curvature = profile_total_curvature(profile);
      out.energy = total_energy(planar_fd(resample_arclength(profile, config.fd_samples)),
                                config.ft_include_centroid);
      return true;
    } catch (const GeoError&) {
      return false;
    }
  };

  std::vector<Components> comp_a(n), comp_b(n);
  std::vector<std::vector<Components>> comp_ab(d, std::vector<Components>(n));
  std::vector<char> keep(n, 1);

  std::vector<Eigen::MatrixXd> ab_matrices;
  ab_matrices.reserve(d);
  for (std::size_t i = 0; i < d; ++i) ab_matrices.push_back(design.ab(i));

  parallel_for(n, jobs, [&](std::size_t r) {
    const Eigen::Index row = static_cast<Eigen::Index>(r);
    if (!evaluate(design.a, row, comp_a[r]) || !evaluate(design.b, row, comp_b[r])) {
      keep[r] = 0;
      return;
    }
    for (std::size_t i = 0; i < d && keep[r]; ++i)
      if (!evaluate(ab_matrices[i], row, comp_ab[i][r])) keep[r] = 0;
  });

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < n; ++r)
    if (keep[r]) rows.push_back(r);
  GoStudyResult result;
  result.excluded_rows = n - rows.size();
  result.retained_rows = rows.size();
  if (rows.size() < 16)
    throw GeoError(ErrorCode::DEGENERATE_DATA, "too few valid designs for index estimation");

  const Eigen::Index q_m = comp_a[rows[0]].moments.size();

  // Column layout per combination; moments first, then k, then ft.
  struct Combo {
    std::string name;
    bool use_m, use_k, use_ft;
  };
  const std::vector<Combo> combos = {
      {"m", true, false, false},     {"k", false, true, false},
      {"ft", false, false, true},    {"m+k", true, true, false},
      {"m+ft", true, false, true},   {"k+ft", false, true, true},
      {"m+k+ft", true, true, true},
  };

  auto fill = [&](const std::vector<Components>& comps, bool use_m, bool use_k, bool use_ft) {
    Eigen::Index q = (use_m ? q_m : 0) + (use_k ? 1 : 0) + (use_ft ? 1 : 0);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), q);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Eigen::Index c = 0;
      const Components& comp = comps[rows[r]];
      if (use_m) {
        out.block(static_cast<Eigen::Index>(r), 0, 1, q_m) = comp.moments.transpose();
        c += q_m;
      }
      if (use_k) out(static_cast<Eigen::Index>(r), c++) = comp.curvature;
      if (use_ft) out(static_cast<Eigen::Index>(r), c++) = comp.energy;
    }
    return out;
  };

  for (const Combo& combo : combos) {
    Eigen::MatrixXd f_a = fill(comp_a, combo.use_m, combo.use_k, combo.use_ft);
    Eigen::MatrixXd f_b = fill(comp_b, combo.use_m, combo.use_k, combo.use_ft);
    std::vector<Eigen::MatrixXd> f_ab;
    f_ab.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
      f_ab.push_back(fill(comp_ab[i], combo.use_m, combo.use_k, combo.use_ft));

    // Standardise each output column with pooled A/B statistics so the trace
    // aggregation is not dominated by large-magnitude moments.
    for (Eigen::Index c = 0; c < f_a.cols(); ++c) {
      const double mean =
          (f_a.col(c).sum() + f_b.col(c).sum()) / static_cast<double>(2 * f_a.rows());
      const double ss = (f_a.col(c).array() - mean).square().sum() +
                        (f_b.col(c).array() - mean).square().sum();
      double sd = std::sqrt(ss / static_cast<double>(2 * f_a.rows() - 1));
      if (!(sd > 1e-30)) sd = 1.0;
      f_a.col(c) = (f_a.col(c).array() - mean) / sd;
      f_b.col(c) = (f_b.col(c).array() - mean) / sd;
      for (auto& m : f_ab) m.col(c) = (m.col(c).array() - mean) / sd;
    }

    result.reports.emplace(combo.name, sobol_indices_vector(f_a, f_b, f_ab));
  }
  return result;
}

}  // namespace geoops
