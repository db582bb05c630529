#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"

namespace relaycast {
namespace {

constexpr double kLogParamMin = -20.0;
constexpr double kLogParamMax = 28.0;

class RelativeObjective {
 public:
  RelativeObjective(const TwoParamModel& model, std::span<const FitSample> samples)
      : model_(model), samples_(samples) {}

  double operator()(double log_p, double log_q) const {
    if (log_p < kLogParamMin || log_p > kLogParamMax || log_q < kLogParamMin ||
        log_q > kLogParamMax) {
      return std::numeric_limits<double>::infinity();
    }
    const double p = std::exp(log_p);
    const double q = std::exp(log_q);
    double sum = 0.0;
    for (const auto& s : samples_) {
      const double r = (model_(s.x, p, q) - s.target) / s.target;
      if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
      sum += r * r;
    }
    return sum;
  }

 private:
  const TwoParamModel& model_;
  std::span<const FitSample> samples_;
};

struct Vertex {
  double log_p;
  double log_q;
  double value;
};

Vertex nelder_mead(const RelativeObjective& objective, Vertex start, int max_iterations) {
  std::array<Vertex, 3> simplex = {start,
                                   Vertex{start.log_p + 0.1, start.log_q, 0.0},
                                   Vertex{start.log_p, start.log_q + 0.1, 0.0}};
  for (auto& v : simplex) v.value = objective(v.log_p, v.log_q);

  auto make = [&](double lp, double lq) { return Vertex{lp, lq, objective(lp, lq)}; };
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
    const Vertex& best = simplex[0];
    const Vertex& worst = simplex[2];
    const double spread = std::abs(worst.value - best.value);
    const double size = std::max({std::abs(simplex[1].log_p - best.log_p),
                                  std::abs(simplex[1].log_q - best.log_q),
                                  std::abs(worst.log_p - best.log_p),
                                  std::abs(worst.log_q - best.log_q)});
    if (size < 1e-11 || spread <= 1e-16 * (std::abs(best.value) + 1e-300)) break;

    const double cp = 0.5 * (simplex[0].log_p + simplex[1].log_p);
    const double cq = 0.5 * (simplex[0].log_q + simplex[1].log_q);
    const Vertex reflected = make(2.0 * cp - worst.log_p, 2.0 * cq - worst.log_q);
    if (reflected.value < simplex[0].value) {
      const Vertex expanded = make(3.0 * cp - 2.0 * worst.log_p, 3.0 * cq - 2.0 * worst.log_q);
      simplex[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < simplex[1].value) {
      simplex[2] = reflected;
    } else {
      const bool outside = reflected.value < worst.value;
      const Vertex& anchor = outside ? reflected : worst;
      const Vertex contracted = make(cp + 0.5 * (anchor.log_p - cp), cq + 0.5 * (anchor.log_q - cq));
      if (contracted.value < anchor.value) {
        simplex[2] = contracted;
      } else {
        for (std::size_t i = 1; i < 3; ++i) {
          simplex[i] = make(simplex[0].log_p + 0.5 * (simplex[i].log_p - simplex[0].log_p),
                            simplex[0].log_q + 0.5 * (simplex[i].log_q - simplex[0].log_q));
        }
      }
    }
  }
  return *std::min_element(simplex.begin(), simplex.end(),
                           [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
}

}  // namespace

TwoParamFit fit_two_param(const TwoParamModel& model, std::span<const FitSample> samples,
                          const FitOptions& options) {
  if (samples.size() < 8) {
    std::ostringstream msg;
    msg << "fit requires at least 8 samples (got " << samples.size() << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  std::set<double> abscissae;
  for (const auto& s : samples) {
    if (!(s.target > 0.0 && s.target <= 1.0)) {
      std::ostringstream msg;
      msg << "fit targets must lie in (0, 1] (got " << s.target << " at x = " << s.x << ")";
      throw Error(ErrorCode::domain_error, msg.str());
    }
    abscissae.insert(s.x);
  }
  if (abscissae.size() < 2) {
    throw Error(ErrorCode::parametric_family_mismatch,
                "samples carry a single abscissa; parameters are not identifiable");
  }

  const RelativeObjective objective(model, samples);
  const std::size_t n = std::max<std::size_t>(options.grid_points, 2);
  const double lp0 = std::log(options.p_min);
  const double lp1 = std::log(options.p_max);
  const double lq0 = std::log(options.q_min);
  const double lq1 = std::log(options.q_max);

  Vertex best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = lp0 + (lp1 - lp0) * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double lq = lq0 + (lq1 - lq0) * static_cast<double>(j) / static_cast<double>(n - 1);
      const double value = objective(lp, lq);
      if (value < best.value) best = {lp, lq, value};
    }
  }
  if (!std::isfinite(best.value)) {
    throw Error(ErrorCode::parametric_family_mismatch, "model is not finite anywhere on the search grid");
  }

  // Two restarts guard against a collapsed simplex on elongated valleys.
  Vertex refined = nelder_mead(objective, best, options.max_refine_iterations);
  refined = nelder_mead(objective, refined, options.max_refine_iterations);

  TwoParamFit fit;
  fit.p = std::exp(refined.log_p);
  fit.q = std::exp(refined.log_q);
  fit.rms_rel = std::sqrt(refined.value / static_cast<double>(samples.size()));
  if (!(fit.rms_rel <= options.mismatch_threshold)) {
    std::ostringstream msg;
    msg << "best relative rms " << fit.rms_rel << " exceeds " << options.mismatch_threshold;
    throw Error(ErrorCode::parametric_family_mismatch, msg.str());
  }
  return fit;
}

}  // namespace relaycast
