#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace adamcheck {

// A differentiable non-negative objective with a known gradient Lipschitz
// constant. Immutable after construction; safe to evaluate concurrently.
class objective {
 public:
  using value_fn = std::function<double(std::span<const double>)>;
  using grad_fn = std::function<void(std::span<const double>, std::span<double>)>;

  objective(std::size_t dimension, double smoothness, value_fn value,
            grad_fn gradient);

  std::size_t dimension() const noexcept { return dimension_; }

  /// Lipschitz constant of the gradient.
  double smoothness() const noexcept { return smoothness_; }

  double value(std::span<const double> w) const;
  std::vector<double> gradient(std::span<const double> w) const;
  void gradient_into(std::span<const double> w, std::span<double> out) const;

  // Records the objective value at the chosen start point. Call once before
  // the objective is shared across runs.
  void bind_start(std::span<const double> w1);
  std::optional<double> initial_value() const noexcept { return initial_value_; }

 private:
  void require_dimension(std::size_t n) const;

  std::size_t dimension_;
  double smoothness_;
  value_fn value_;
  grad_fn gradient_;
  std::optional<double> initial_value_;
};

/// Axis-scaled quadratic f(w) = sum_i s_i w_i^2 with gradient 2 s .* w and
/// smoothness 2 max(s). All scales must be strictly positive.
objective make_quadratic(std::vector<double> scales);

/// Mean logistic loss over `samples` rows of `features` (row-major,
/// samples x dim) with binary labels. Smoothness is the conservative bound
/// ||X||_F^2 / (4 n).
objective make_logistic(std::vector<double> features, std::size_t samples,
                        std::size_t dim, std::vector<int> labels);

// Synthetic binary classification task from a fixed seeded recipe:
// standard-normal features, labels sampled from a planted linear model, all
// drawn from counter-based streams keyed on data_seed.
objective make_synthetic_logistic(std::size_t samples, std::size_t dim,
                                  std::uint64_t data_seed);

/// Central finite differences (f(w + h e_i) - f(w - h e_i)) / (2h); h > 0.
std::vector<double> finite_diff_grad(const objective& obj,
                                     std::span<const double> w,
                                     double step = 1e-5);

}  // namespace adamcheck
