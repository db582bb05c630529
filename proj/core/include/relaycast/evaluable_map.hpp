#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "relaycast/monotone_cubic.hpp"

namespace relaycast {

/// What a table does when asked for a value outside its knot range.
enum class Extension {
  none,  ///< out-of-range evaluation is a domain error
  hold,  ///< the nearest end value is returned
};

/// Real function of one non-negative argument on a closed domain, either as a
/// closed-form rule or as a monotone cubic interpolation table.
class EvaluableMap {
 public:
  using Rule = std::function<double(double)>;

  static EvaluableMap closed_form(Rule rule, double lo, double hi);
  static EvaluableMap table(std::vector<double> x, std::vector<double> y,
                            Extension extension = Extension::none);

  double operator()(double x) const;

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool is_table() const noexcept { return table_ != nullptr; }
  Extension extension() const noexcept { return extension_; }
  /// Interpolant behind a table map; nullptr for closed-form maps.
  const MonotoneCubic* interpolant() const noexcept { return table_.get(); }

  /// (x, value) pairs at n evenly spaced points spanning [lo, hi].
  std::vector<std::pair<double, double>> sample(std::size_t n) const;

 private:
  EvaluableMap() = default;

  Rule rule_;
  std::shared_ptr<const MonotoneCubic> table_;
  Extension extension_ = Extension::none;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace relaycast
