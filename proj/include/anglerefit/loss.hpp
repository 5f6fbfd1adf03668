#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace anglerefit {

/// Convex, non-increasing, continuously differentiable margin loss l(u)
/// with l'(u) < 0 everywhere.
class MarginLoss {
 public:
  virtual ~MarginLoss() = default;

  /// Identifier used on the command line and in model documents.
  virtual std::string name() const = 0;
  virtual double eval(double u) const = 0;
  virtual double deriv(double u) const = 0;

  /// log(-l'(u)). Override when a closed form avoids underflow of l'.
  virtual double log_neg_deriv(double u) const;

  /// Upper bound on l''(u); used to seed the solver step size.
  virtual double curvature_bound() const = 0;
};

/// l(u) = log(1 + exp(-u)).
class LogisticLoss final : public MarginLoss {
 public:
  std::string name() const override { return "logistic"; }
  double eval(double u) const override;
  double deriv(double u) const override;
  double log_neg_deriv(double u) const override;
  double curvature_bound() const override { return 0.25; }
};

/// Soft LUM (a = 1, c = 0): 1 - u for u < 0, 1/(1 + u) for u >= 0.
class SoftLumLoss final : public MarginLoss {
 public:
  std::string name() const override { return "soft"; }
  double eval(double u) const override;
  double deriv(double u) const override;
  double log_neg_deriv(double u) const override;
  double curvature_bound() const override { return 2.0; }
};

double logistic_eval(double u);
double logistic_deriv(double u);
double soft_lum_eval(double u);
double soft_lum_deriv(double u);

/// Looks up a shipped or registered loss. "logistic" and "soft" always exist;
/// "logi" is accepted as an alias of "logistic".
const MarginLoss& loss_by_name(std::string_view name);

/// Makes an additional loss available to loss_by_name. Re-registering a name
/// replaces the previous entry; the shipped names cannot be replaced.
void register_loss(std::shared_ptr<const MarginLoss> loss);

std::vector<std::string> loss_names();

}  // namespace anglerefit
