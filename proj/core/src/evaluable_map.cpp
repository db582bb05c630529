#include "relaycast/evaluable_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaycast/error.hpp"

namespace relaycast {
namespace {

// Endpoints computed by root finding can sit an ulp or two outside the domain.
bool within(double x, double lo, double hi) {
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return x >= lo - slack && x <= hi + slack;
}

}  // namespace

EvaluableMap EvaluableMap::closed_form(Rule rule, double lo, double hi) {
  if (!rule) throw Error(ErrorCode::domain_error, "closed-form map needs a rule");
  if (!(lo <= hi)) throw Error(ErrorCode::domain_error, "closed-form map needs lo <= hi");
  EvaluableMap map;
  map.rule_ = std::move(rule);
  map.lo_ = lo;
  map.hi_ = hi;
  return map;
}

EvaluableMap EvaluableMap::table(std::vector<double> x, std::vector<double> y, Extension extension) {
  EvaluableMap map;
  map.table_ = std::make_shared<const MonotoneCubic>(std::move(x), std::move(y));
  map.extension_ = extension;
  map.lo_ = map.table_->front();
  map.hi_ = map.table_->back();
  return map;
}

double EvaluableMap::operator()(double x) const {
  if (!within(x, lo_, hi_)) {
    if (table_ && extension_ == Extension::hold) return (*table_)(x);
    std::ostringstream msg;
    msg << "evaluation at " << x << " outside [" << lo_ << ", " << hi_ << "]";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  const double clamped = std::clamp(x, lo_, hi_);
  return table_ ? (*table_)(clamped) : rule_(clamped);
}

std::vector<std::pair<double, double>> EvaluableMap::sample(std::size_t n) const {
  std::vector<std::pair<double, double>> out;
  if (n == 0) return out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x =
        n == 1 ? lo_ : lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.emplace_back(x, (*this)(x));
  }
  return out;
}

}  // namespace relaycast
