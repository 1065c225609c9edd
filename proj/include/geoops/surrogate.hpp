#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "geoops/featureset.hpp"
#include "geoops/subspace.hpp"

namespace geoops {

enum class GprKernel { RBF, MATERN_5_2, RATIONAL_QUADRATIC };

inline const char* to_string(GprKernel k) {
  switch (k) {
    case GprKernel::RBF: return "rbf";
    case GprKernel::MATERN_5_2: return "matern52";
    case GprKernel::RATIONAL_QUADRATIC: return "rq";
  }
  return "unknown";
}

inline GprKernel parse_gpr_kernel(const std::string& name) {
  if (name == "rbf") return GprKernel::RBF;
  if (name == "matern52") return GprKernel::MATERN_5_2;
  if (name == "rq") return GprKernel::RATIONAL_QUADRATIC;
  throw GeoError(ErrorCode::INVALID_ARGUMENT, "unknown kernel '" + name + "'");
}

enum class GprMean { ZERO, CONSTANT };

/// Gaussian-process regressor with hyperparameters maximising the log
/// marginal likelihood. Targets are standardised internally; predictions
/// come back in original units.
struct GprModel {
  GprKernel kernel = GprKernel::RBF;
  GprMean mean_fn = GprMean::CONSTANT;
  Eigen::VectorXd length_scales;  // per-dimension (a shared scale is fitted)
  double signal_variance = 1.0;
  double noise_variance = 1e-8;  // includes the 1e-8 jitter floor
  double extra_jitter = 0.0;     // added when factorisation needed help

  Eigen::MatrixXd x_train;
  double y_mean = 0.0;  // target standardisation snapshot
  double y_scale = 1.0;

  Eigen::MatrixXd chol_lower;  // L with L L^T = K + noise I
  Eigen::VectorXd alpha;       // (K + noise I)^{-1} y_std
  double log_marginal_likelihood = 0.0;
};

struct FitMetrics {
  double r2 = 0.0;
  double mape = 0.0;  // percent
  double rmse = 0.0;
  std::size_t mape_floored_terms = 0;  // |y| below the 1e-12 division guard
};

namespace detail {

inline double kernel_value(GprKernel kernel, double r2, double signal_variance) {
  switch (kernel) {
    case GprKernel::RBF: return signal_variance * std::exp(-0.5 * r2);
    case GprKernel::MATERN_5_2: {
      const double r = std::sqrt(r2);
      const double a = std::sqrt(5.0) * r;
      return signal_variance * (1.0 + a + 5.0 * r2 / 3.0) * std::exp(-a);
    }
    case GprKernel::RATIONAL_QUADRATIC:
      return signal_variance / (1.0 + 0.5 * r2);  // shape parameter fixed at 1
  }
  return 0.0;
}

/// Squared scaled distance between rows.
inline double scaled_r2(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b,
                        double inv_length2) {
  return (a - b).squaredNorm() * inv_length2;
}

struct NlmlResult {
  double value = 1e300;
  Eigen::MatrixXd chol_lower;
  Eigen::VectorXd alpha;
  double extra_jitter = 0.0;
  bool ok = false;
};

inline NlmlResult negative_log_marginal_likelihood(const Eigen::MatrixXd& x,
                                                   const Eigen::VectorXd& y, GprKernel kernel,
                                                   double length, double signal_variance,
                                                   double noise_variance) {
  const Eigen::Index n = x.rows();
  const double inv_length2 = 1.0 / (length * length);
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = signal_variance;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = kernel_value(kernel, scaled_r2(x.row(i), x.row(j), inv_length2),
                                    signal_variance);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }

  NlmlResult result;
  double jitter = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd k_noisy = gram;
    k_noisy.diagonal().array() += noise_variance + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(k_noisy);
    if (llt.info() == Eigen::Success) {
      result.chol_lower = llt.matrixL();
      result.alpha = llt.solve(y);
      double log_det = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(result.chol_lower(i, i));
      result.value = 0.5 * y.dot(result.alpha) + log_det +
                     0.5 * static_cast<double>(n) * std::log(2.0 * kPi);
      result.extra_jitter = jitter;
      result.ok = true;
      return result;
    }
    jitter = jitter == 0.0 ? 1e-8 : jitter * 10.0;
    if (jitter > 1e-4) break;
  }
  return result;
}

/// Nelder-Mead on a 3-vector (log length, log signal sd, log noise sd).
template <typename Fn>
inline Eigen::Vector3d nelder_mead(Fn&& objective, const Eigen::Vector3d& start,
                                   int max_evals = 240) {
  constexpr int dim = 3;
  std::vector<Eigen::Vector3d> simplex(dim + 1, start);
  std::vector<double> value(dim + 1);
  for (int i = 0; i < dim; ++i) simplex[i + 1](i) += 0.5;
  int evals = 0;
  for (int i = 0; i <= dim; ++i) {
    value[i] = objective(simplex[i]);
    ++evals;
  }

  auto order = [&] {
    for (int i = 0; i <= dim; ++i)
      for (int j = i + 1; j <= dim; ++j)
        if (value[j] < value[i]) {
          std::swap(value[i], value[j]);
          std::swap(simplex[i], simplex[j]);
        }
  };
  order();

  while (evals < max_evals) {
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int i = 0; i < dim; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(dim);

    const Eigen::Vector3d reflected = centroid + (centroid - simplex[dim]);
    const double fr = objective(reflected);
    ++evals;
    if (fr < value[0]) {
      const Eigen::Vector3d expanded = centroid + 2.0 * (centroid - simplex[dim]);
      const double fe = objective(expanded);
      ++evals;
      if (fe < fr) {
        simplex[dim] = expanded;
        value[dim] = fe;
      } else {
        simplex[dim] = reflected;
        value[dim] = fr;
      }
    } else if (fr < value[dim - 1]) {
      simplex[dim] = reflected;
      value[dim] = fr;
    } else {
      const Eigen::Vector3d contracted = centroid + 0.5 * (simplex[dim] - centroid);
      const double fc = objective(contracted);
      ++evals;
      if (fc < value[dim]) {
        simplex[dim] = contracted;
        value[dim] = fc;
      } else {
        for (int i = 1; i <= dim; ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          value[i] = objective(simplex[i]);
          ++evals;
        }
      }
    }
    order();
    if (std::abs(value[dim] - value[0]) < 1e-9 * (1.0 + std::abs(value[0]))) break;
  }
  return simplex[0];
}

}  // namespace detail

/// Fit with caller-supplied hyperparameters (no likelihood search).
inline GprModel fit_gpr_fixed(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              GprKernel kernel, double length, double signal_variance,
                              double noise_variance, GprMean mean_fn = GprMean::CONSTANT) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw GeoError(ErrorCode::INVALID_ARGUMENT, "need at least 2 training points");
  if (y.size() != n) throw GeoError(ErrorCode::DIMENSION_MISMATCH, "X/y row mismatch");
  if (!x.allFinite() || !y.allFinite()) throw GeoError(ErrorCode::NAN_INPUT, "non-finite input");

  GprModel model;
  model.kernel = kernel;
  model.mean_fn = mean_fn;
  model.x_train = x;
  model.y_mean = mean_fn == GprMean::CONSTANT ? y.mean() : 0.0;
  model.y_scale = 1.0;
  model.signal_variance = signal_variance;
  model.noise_variance = std::max(noise_variance, 1e-8);
  model.length_scales = Eigen::VectorXd::Constant(x.cols(), length);

  const Eigen::VectorXd y_centred = y.array() - model.y_mean;
  const detail::NlmlResult state = detail::negative_log_marginal_likelihood(
      x, y_centred, kernel, length, model.signal_variance, model.noise_variance);
  if (!state.ok)
    throw GeoError(ErrorCode::ILL_CONDITIONED, "factorisation failed at the jitter cap");
  model.chol_lower = state.chol_lower;
  model.alpha = state.alpha;
  model.extra_jitter = state.extra_jitter;
  model.log_marginal_likelihood = -state.value;
  return model;
}

/// Maximises the log marginal likelihood with 8 multistarts over log-spaced
/// length scales (Nelder-Mead locally). Noise variance keeps a 1e-8 floor;
/// factorisation jitter is capped at 1e-4.
inline GprModel fit_gpr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GprKernel kernel,
                        std::uint64_t seed, GprMean mean_fn = GprMean::CONSTANT) {
  const Eigen::Index n = x.rows();
  if (n < 8) throw GeoError(ErrorCode::INVALID_ARGUMENT, "need at least 8 training points");
  if (y.size() != n) throw GeoError(ErrorCode::DIMENSION_MISMATCH, "X/y row mismatch");
  if (!x.allFinite() || !y.allFinite()) throw GeoError(ErrorCode::NAN_INPUT, "non-finite input");

  GprModel model;
  model.kernel = kernel;
  model.mean_fn = mean_fn;
  model.x_train = x;
  model.y_mean = mean_fn == GprMean::CONSTANT ? y.mean() : 0.0;
  const double y_sd = std::sqrt((y.array() - y.mean()).square().sum() /
                                std::max<double>(1.0, static_cast<double>(n - 1)));
  model.y_scale = y_sd > 1e-30 ? y_sd : 1.0;
  const Eigen::VectorXd y_std = (y.array() - model.y_mean) / model.y_scale;

  const double median = median_pairwise_distance(x);
  const double base_length = median > 1e-12 ? median : 1.0;

  Rng rng(seed);
  double best_value = 1e300;
  Eigen::Vector3d best_theta = Eigen::Vector3d::Zero();
  bool any_ok = false;

  auto objective = [&](const Eigen::Vector3d& theta) {
    const double length = std::exp(theta(0));
    const double signal = std::exp(2.0 * theta(1));
    const double noise = 1e-8 + std::exp(2.0 * theta(2));
    if (length > 1e6 || length < 1e-9 || signal > 1e12 || noise > 1e6) return 1e300;
    const detail::NlmlResult r =
        detail::negative_log_marginal_likelihood(x, y_std, kernel, length, signal, noise);
    return r.ok ? r.value : 1e300;
  };

  for (int start = 0; start < 8; ++start) {
    const double exponent = -1.0 + 2.0 * static_cast<double>(start) / 7.0;
    Eigen::Vector3d theta;
    theta(0) = std::log(base_length * std::pow(10.0, exponent));
    theta(1) = std::log(1.0) + 0.1 * (rng.uniform01() - 0.5);
    // Cycle noisy, small-noise and floor-noise starts so interpolating fits
    // reach the 1e-8 noise floor while noisy targets keep a noisy optimum.
    const double noise_start = start % 3 == 0 ? 0.05 : (start % 3 == 1 ? 1e-3 : 1e-4);
    theta(2) = std::log(noise_start) + 0.1 * (rng.uniform01() - 0.5);
    const Eigen::Vector3d optimum = detail::nelder_mead(objective, theta);
    const double value = objective(optimum);
    if (value < best_value) {
      best_value = value;
      best_theta = optimum;
      any_ok = true;
    }
  }
  if (!any_ok) throw GeoError(ErrorCode::ILL_CONDITIONED, "no usable likelihood optimum");

  const double length = std::exp(best_theta(0));
  model.signal_variance = std::exp(2.0 * best_theta(1));
  model.noise_variance = 1e-8 + std::exp(2.0 * best_theta(2));
  model.length_scales = Eigen::VectorXd::Constant(x.cols(), length);

  const detail::NlmlResult final_state = detail::negative_log_marginal_likelihood(
      x, y_std, kernel, length, model.signal_variance, model.noise_variance);
  if (!final_state.ok)
    throw GeoError(ErrorCode::ILL_CONDITIONED, "factorisation failed at the jitter cap");
  model.chol_lower = final_state.chol_lower;
  model.alpha = final_state.alpha;
  model.extra_jitter = final_state.extra_jitter;
  model.log_marginal_likelihood = -final_state.value;
  return model;
}

/// Posterior mean and (latent-function) variance at query rows. Rows are
/// processed independently, so batched and one-at-a-time calls agree
/// bit-for-bit.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> predict(const GprModel& model,
                                                           const Eigen::MatrixXd& x_query) {
  if (x_query.cols() != model.x_train.cols())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "query columns do not match training matrix");
  const Eigen::Index n = model.x_train.rows();
  const Eigen::Index m = x_query.rows();
  const double length = model.length_scales(0);
  const double inv_length2 = 1.0 / (length * length);

  Eigen::VectorXd mean(m), variance(m);
  Eigen::VectorXd k_star(n);
  for (Eigen::Index q = 0; q < m; ++q) {
    for (Eigen::Index i = 0; i < n; ++i)
      k_star(i) = detail::kernel_value(
          model.kernel, detail::scaled_r2(x_query.row(q), model.x_train.row(i), inv_length2),
          model.signal_variance);
    const double f_std = k_star.dot(model.alpha);
    mean(q) = model.y_mean + model.y_scale * f_std;
    const Eigen::VectorXd v =
        model.chol_lower.triangularView<Eigen::Lower>().solve(k_star);
    const double var_std = std::max(0.0, model.signal_variance - v.squaredNorm());
    variance(q) = var_std * model.y_scale * model.y_scale;
  }
  return {mean, variance};
}

/// R^2 (1 - SS_res/SS_tot), MAPE (percent, 1e-12 division floor), RMSE.
inline FitMetrics compute_fit_metrics(const Eigen::VectorXd& y_pred,
                                      const Eigen::VectorXd& y_test) {
  if (y_pred.size() != y_test.size())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "prediction/target length mismatch");
  FitMetrics metrics;
  const Eigen::Index n = y_test.size();
  const double y_bar = y_test.mean();
  double ss_res = 0.0, ss_tot = 0.0, abs_pct = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double err = y_pred(i) - y_test(i);
    ss_res += err * err;
    ss_tot += (y_test(i) - y_bar) * (y_test(i) - y_bar);
    double denom = std::abs(y_test(i));
    if (denom < 1e-12) {
      denom = 1e-12;
      ++metrics.mape_floored_terms;
    }
    abs_pct += std::abs(err) / denom;
  }
  metrics.r2 = 1.0 - ss_res / std::max(ss_tot, 1e-300);
  metrics.mape = 100.0 * abs_pct / static_cast<double>(n);
  metrics.rmse = std::sqrt(ss_res / static_cast<double>(n));
  return metrics;
}

/// Metrics of the model's predictions on a held-out split.
inline FitMetrics evaluate(const GprModel& model, const Eigen::MatrixXd& x_test,
                           const Eigen::VectorXd& y_test) {
  return compute_fit_metrics(predict(model, x_test).first, y_test);
}

struct AblationRow {
  std::string combo;
  GprKernel kernel = GprKernel::RBF;
  FitMetrics metrics;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

/// Seeded shuffle split shared by the ablation protocol and any caller that
/// wants to reproduce it: first n_train indices train, the rest test.
inline std::vector<std::size_t> split_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  return order;
}

/// The ablation protocol: per combo, standardise, split 80/20 with the given
/// seed (one split shared across combos), fit every kernel in the grid, and
/// report the kernel with the lowest held-out RMSE.
inline std::vector<AblationRow> ablation_study(const std::vector<GoVector>& gos,
                                               const std::vector<double>& labels,
                                               const std::vector<ComboSpec>& combos,
                                               const std::vector<GprKernel>& kernel_grid,
                                               std::uint64_t seed, double train_fraction = 0.8) {
  if (gos.size() != labels.size())
    throw GeoError(ErrorCode::DIMENSION_MISMATCH, "designs and labels differ in count");
  if (gos.size() < 10) throw GeoError(ErrorCode::INVALID_ARGUMENT, "need at least 10 designs");
  if (combos.empty() || kernel_grid.empty())
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "empty combo list or kernel grid");

  const std::size_t n = gos.size();
  const std::vector<std::size_t> order = split_order(n, seed);
  const std::size_t n_train =
      std::max<std::size_t>(8, static_cast<std::size_t>(std::floor(train_fraction * n)));
  if (n_train >= n) throw GeoError(ErrorCode::INVALID_ARGUMENT, "split leaves no test rows");

  std::vector<AblationRow> table;
  for (const ComboSpec& combo : combos) {
    const DesignMatrix matrix = build_matrix(gos, combo, /*standardise=*/true);

    Eigen::MatrixXd x_train(n_train, matrix.values.cols());
    Eigen::MatrixXd x_test(n - n_train, matrix.values.cols());
    Eigen::VectorXd y_train(n_train), y_test(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Index src = static_cast<Eigen::Index>(order[i]);
      if (i < n_train) {
        x_train.row(static_cast<Eigen::Index>(i)) = matrix.values.row(src);
        y_train(static_cast<Eigen::Index>(i)) = labels[order[i]];
      } else {
        x_test.row(static_cast<Eigen::Index>(i - n_train)) = matrix.values.row(src);
        y_test(static_cast<Eigen::Index>(i - n_train)) = labels[order[i]];
      }
    }

    AblationRow best;
    bool have_best = false;
    for (const GprKernel kernel : kernel_grid) {
      const GprModel model = fit_gpr(x_train, y_train, kernel, seed);
      const FitMetrics metrics = evaluate(model, x_test, y_test);
      if (!have_best || metrics.rmse < best.metrics.rmse) {
        best.combo = combo.label();
        best.kernel = kernel;
        best.metrics = metrics;
        best.n_train = n_train;
        best.n_test = n - n_train;
        best.seed = seed;
        have_best = true;
      }
    }
    table.push_back(best);
  }
  return table;
}

}  // namespace geoops
