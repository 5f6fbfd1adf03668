#include "anglerefit/loss.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "anglerefit/errors.hpp"

namespace anglerefit {
namespace {

constexpr double kAsymptoticCutoff = 30.0;

void require_finite(double u) {
  if (!std::isfinite(u)) throw InvalidArgument("loss evaluated at a non-finite margin");
}

// log(1 + e^u)
double softplus(double u) {
  if (u > kAsymptoticCutoff) return u + std::exp(-u);
  if (u < -kAsymptoticCutoff) return std::exp(u);
  return std::log1p(std::exp(u));
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<const MarginLoss>, std::less<>> extra;
  // Replaced entries stay alive: callers may still hold references to them.
  std::vector<std::shared_ptr<const MarginLoss>> retired;
};

Registry& registry() {
  static Registry r;
  return r;
}

const LogisticLoss kLogistic;
const SoftLumLoss kSoft;

}  // namespace

double MarginLoss::log_neg_deriv(double u) const { return std::log(-deriv(u)); }

double logistic_eval(double u) {
  require_finite(u);
  return softplus(-u);
}

double logistic_deriv(double u) {
  require_finite(u);
  if (u > kAsymptoticCutoff) {
    const double e = std::exp(-u);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(u));
}

double soft_lum_eval(double u) {
  require_finite(u);
  return u < 0.0 ? 1.0 - u : 1.0 / (1.0 + u);
}

double soft_lum_deriv(double u) {
  require_finite(u);
  if (u < 0.0) return -1.0;
  const double d = 1.0 + u;
  return -1.0 / (d * d);
}

double LogisticLoss::eval(double u) const { return logistic_eval(u); }
double LogisticLoss::deriv(double u) const { return logistic_deriv(u); }
double LogisticLoss::log_neg_deriv(double u) const {
  require_finite(u);
  return -softplus(u);
}

double SoftLumLoss::eval(double u) const { return soft_lum_eval(u); }
double SoftLumLoss::deriv(double u) const { return soft_lum_deriv(u); }
double SoftLumLoss::log_neg_deriv(double u) const {
  require_finite(u);
  return u < 0.0 ? 0.0 : -2.0 * std::log1p(u);
}

const MarginLoss& loss_by_name(std::string_view name) {
  if (name == "logistic" || name == "logi") return kLogistic;
  if (name == "soft") return kSoft;
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (auto it = r.extra.find(name); it != r.extra.end()) return *it->second;
  throw InvalidArgument("unknown loss '" + std::string(name) + "'");
}

void register_loss(std::shared_ptr<const MarginLoss> loss) {
  if (!loss) throw InvalidArgument("cannot register a null loss");
  const std::string name = loss->name();
  if (name == "logistic" || name == "logi" || name == "soft") {
    throw InvalidArgument("loss name '" + name + "' is reserved");
  }
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto& slot = r.extra[name];
  if (slot) r.retired.push_back(std::move(slot));
  slot = std::move(loss);
}

std::vector<std::string> loss_names() {
  std::vector<std::string> names{"logistic", "soft"};
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  for (const auto& [name, _] : r.extra) names.push_back(name);
  return names;
}

}  // namespace anglerefit
