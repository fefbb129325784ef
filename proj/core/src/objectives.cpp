#include "adamcheck/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "adamcheck/rng.hpp"

namespace adamcheck {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow for large |z|.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

objective::objective(std::size_t dimension, double smoothness, value_fn value,
                     grad_fn gradient)
    : dimension_(dimension),
      smoothness_(smoothness),
      value_(std::move(value)),
      gradient_(std::move(gradient)) {
  if (dimension_ == 0) {
    throw std::invalid_argument("objective: dimension must be positive");
  }
  if (!(smoothness_ > 0.0) || !std::isfinite(smoothness_)) {
    throw std::invalid_argument("objective: smoothness must be positive and finite");
  }
}

void objective::require_dimension(std::size_t n) const {
  if (n != dimension_) {
    throw std::invalid_argument("objective: point dimension mismatch");
  }
}

double objective::value(std::span<const double> w) const {
  require_dimension(w.size());
  return value_(w);
}

std::vector<double> objective::gradient(std::span<const double> w) const {
  std::vector<double> out(dimension_);
  gradient_into(w, out);
  return out;
}

void objective::gradient_into(std::span<const double> w,
                              std::span<double> out) const {
  require_dimension(w.size());
  require_dimension(out.size());
  gradient_(w, out);
}

void objective::bind_start(std::span<const double> w1) {
  initial_value_ = value(w1);
}

objective make_quadratic(std::vector<double> scales) {
  if (scales.empty()) {
    throw std::invalid_argument("make_quadratic: scales must be non-empty");
  }
  double max_scale = 0.0;
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("make_quadratic: scales must be strictly positive");
    }
    max_scale = std::max(max_scale, s);
  }
  const std::size_t dim = scales.size();
  auto shared = std::make_shared<const std::vector<double>>(std::move(scales));
  auto value = [shared](std::span<const double> w) {
    double f = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      f += (*shared)[i] * w[i] * w[i];
    }
    return f;
  };
  auto grad = [shared](std::span<const double> w, std::span<double> out) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      out[i] = 2.0 * (*shared)[i] * w[i];
    }
  };
  return objective(dim, 2.0 * max_scale, std::move(value), std::move(grad));
}

objective make_logistic(std::vector<double> features, std::size_t samples,
                        std::size_t dim, std::vector<int> labels) {
  if (samples == 0 || dim == 0) {
    throw std::invalid_argument("make_logistic: need at least one sample and one feature");
  }
  if (features.size() != samples * dim) {
    throw std::invalid_argument("make_logistic: feature matrix shape mismatch");
  }
  if (labels.size() != samples) {
    throw std::invalid_argument("make_logistic: label count mismatch");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument("make_logistic: labels must be 0 or 1");
    }
  }
  double frobenius_sq = 0.0;
  for (double x : features) {
    frobenius_sq += x * x;
  }
  // Valid upper bound on the Hessian norm; the true constant is smaller.
  const double smoothness =
      std::max(frobenius_sq / (4.0 * static_cast<double>(samples)), 1e-12);

  struct data {
    std::vector<double> x;
    std::vector<int> y;
    std::size_t n, d;
  };
  auto shared = std::make_shared<const data>(
      data{std::move(features), std::move(labels), samples, dim});

  auto value = [shared](std::span<const double> w) {
    double loss = 0.0;
    for (std::size_t i = 0; i < shared->n; ++i) {
      const double* row = shared->x.data() + i * shared->d;
      double z = 0.0;
      for (std::size_t j = 0; j < shared->d; ++j) {
        z += row[j] * w[j];
      }
      loss += softplus(z) - static_cast<double>(shared->y[i]) * z;
    }
    return loss / static_cast<double>(shared->n);
  };
  auto grad = [shared](std::span<const double> w, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < shared->n; ++i) {
      const double* row = shared->x.data() + i * shared->d;
      double z = 0.0;
      for (std::size_t j = 0; j < shared->d; ++j) {
        z += row[j] * w[j];
      }
      const double residual = sigmoid(z) - static_cast<double>(shared->y[i]);
      for (std::size_t j = 0; j < shared->d; ++j) {
        out[j] += residual * row[j];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(shared->n);
    for (std::size_t j = 0; j < shared->d; ++j) {
      out[j] *= inv_n;
    }
  };
  return objective(dim, smoothness, std::move(value), std::move(grad));
}

objective make_synthetic_logistic(std::size_t samples, std::size_t dim,
                                  std::uint64_t data_seed) {
  if (samples == 0 || dim == 0) {
    throw std::invalid_argument("make_synthetic_logistic: need positive sizes");
  }
  // Stream layout per data_seed: stream 0 features, stream 1 planted weights,
  // stream 2 label coins.
  rng_stream feature_stream(data_seed, 0, 0);
  std::vector<double> features(samples * dim);
  for (double& x : features) {
    x = feature_stream.next_gaussian();
  }

  rng_stream weight_stream(data_seed, 1, 0);
  std::vector<double> planted(dim);
  const double scale = 3.0 / std::sqrt(static_cast<double>(dim));
  for (double& w : planted) {
    w = scale * weight_stream.next_gaussian();
  }

  rng_stream label_stream(data_seed, 2, 0);
  std::vector<int> labels(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      z += features[i * dim + j] * planted[j];
    }
    labels[i] = label_stream.next_unit() < sigmoid(z) ? 1 : 0;
  }
  return make_logistic(std::move(features), samples, dim, std::move(labels));
}

std::vector<double> finite_diff_grad(const objective& obj,
                                     std::span<const double> w, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite_diff_grad: step must be positive");
  }
  std::vector<double> point(w.begin(), w.end());
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + step;
    const double plus = obj.value(point);
    point[i] = saved - step;
    const double minus = obj.value(point);
    point[i] = saved;
    out[i] = (plus - minus) / (2.0 * step);
  }
  return out;
}

}  // namespace adamcheck
