#include "tunable/cost_model.hpp"

#include <cmath>
#include <sstream>

#include "tunable/error.hpp"
#include "tunable/lambert_w.hpp"

namespace tunable {

namespace {

constexpr double kDomainSlack = 1e-12;

bool within(const Interval& d, double v) {
  const double lo = d.lo * (1.0 - kDomainSlack);
  const double hi = std::isinf(d.hi) ? d.hi : d.hi * (1.0 + kDomainSlack);
  return v >= lo && v <= hi;
}

}  // namespace

CostModel::CostModel(CostKind kind, double r, Interval domain)
    : kind_(kind), r_(r), domain_(domain) {
  detail::require(std::isfinite(domain.lo) && domain.lo >= 0.0,
                  "cost model domain must start at a nonnegative value");
  detail::require(domain.hi > domain.lo, "cost model domain is empty");
  switch (kind_) {
    case CostKind::power:
      detail::require(std::isfinite(r_) && r_ > 0.0, "power cost needs r > 0");
      break;
    case CostKind::logarithmic:
      detail::require(domain.hi < 1.0, "logarithmic cost needs hi < 1 so that h > 0");
      break;
    case CostKind::log_squared:
      detail::require(domain.hi <= kLogSquaredCap,
                      "log-squared cost needs hi <= 1 - 1e-12 so that h' < 0");
      break;
  }
}

CostModel CostModel::power(double r, Interval domain) {
  return CostModel(CostKind::power, r, domain);
}

CostModel CostModel::logarithmic(Interval domain) {
  return CostModel(CostKind::logarithmic, 0.0, domain);
}

CostModel CostModel::log_squared(Interval domain) {
  return CostModel(CostKind::log_squared, 0.0, domain);
}

CostModel CostModel::parse(const std::string& spec, Interval domain) {
  if (spec == "log") return logarithmic(domain);
  if (spec == "logsq") return log_squared(domain);
  if (spec.rfind("power:", 0) == 0) {
    const std::string tail = spec.substr(6);
    std::size_t used = 0;
    double r = 0.0;
    try {
      r = std::stod(tail, &used);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse cost exponent in '" + spec + "'");
    }
    detail::require(used == tail.size(), "trailing characters in cost spec '" + spec + "'");
    return power(r, domain);
  }
  throw InvalidInput("unknown cost model '" + spec + "' (expected power:R, log or logsq)");
}

CostModel CostModel::with_domain(Interval domain) const {
  return CostModel(kind_, r_, domain);
}

std::string CostModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case CostKind::power: os << "power:" << r_; break;
    case CostKind::logarithmic: os << "log"; break;
    case CostKind::log_squared: os << "logsq"; break;
  }
  return os.str();
}

void CostModel::check_delta(double delta) const {
  if (!(delta > 0.0) || !within(domain_, delta)) {
    std::ostringstream os;
    os << "inexactness " << delta << " outside cost model domain [" << domain_.lo << ", "
       << domain_.hi << "]";
    throw InvalidInput(os.str());
  }
}

double CostModel::raw_value(double delta) const {
  switch (kind_) {
    case CostKind::power: return std::pow(delta, -r_);
    case CostKind::logarithmic: return -std::log(delta);
    case CostKind::log_squared: {
      const double l = std::log(delta);
      return l * l;
    }
  }
  return 0.0;
}

double CostModel::raw_derivative(double delta) const {
  switch (kind_) {
    case CostKind::power: return -r_ * std::pow(delta, -(r_ + 1.0));
    case CostKind::logarithmic: return -1.0 / delta;
    case CostKind::log_squared: return 2.0 * std::log(delta) / delta;
  }
  return 0.0;
}

double CostModel::raw_derivative_inverse(double slope) const {
  const double omega = -slope;
  switch (kind_) {
    case CostKind::power: return std::pow(omega / r_, -1.0 / (r_ + 1.0));
    case CostKind::logarithmic: return 1.0 / omega;
    case CostKind::log_squared: {
      // 2 W0(w/2) / w rewritten as exp(-W0(w/2)) to stay accurate for large w.
      return std::exp(-lambert_w0(0.5 * omega));
    }
  }
  return 0.0;
}

double CostModel::raw_inverse(double cost) const {
  switch (kind_) {
    case CostKind::power: return std::pow(cost, -1.0 / r_);
    case CostKind::logarithmic: return std::exp(-cost);
    case CostKind::log_squared: return std::exp(-std::sqrt(cost));
  }
  return 0.0;
}

double CostModel::raw_second_derivative(double delta) const {
  switch (kind_) {
    case CostKind::power: return r_ * (r_ + 1.0) * std::pow(delta, -(r_ + 2.0));
    case CostKind::logarithmic: return 1.0 / (delta * delta);
    case CostKind::log_squared: return (2.0 - 2.0 * std::log(delta)) / (delta * delta);
  }
  return 0.0;
}

double CostModel::value(double delta) const {
  check_delta(delta);
  return raw_value(delta);
}

double CostModel::derivative(double delta) const {
  check_delta(delta);
  return raw_derivative(delta);
}

double CostModel::derivative_inverse(double slope) const {
  if (!(slope < 0.0) || !std::isfinite(slope)) {
    throw InvalidInput("derivative inverse needs a finite negative slope");
  }
  const double delta = raw_derivative_inverse(slope);
  if (!within(domain_, delta)) {
    throw InvalidInput("slope outside the image of h' over the cost domain");
  }
  return delta;
}

double CostModel::inverse(double cost) const {
  if (!std::isfinite(cost) || (kind_ != CostKind::logarithmic && cost <= 0.0)) {
    throw InvalidInput("cost outside the image of h");
  }
  const double delta = raw_inverse(cost);
  if (!(delta > 0.0) || !within(domain_, delta)) {
    throw InvalidInput("cost outside the image of h over the cost domain");
  }
  return delta;
}

}  // namespace tunable
