#include "relaycast/distributions.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "relaycast/csv.hpp"
#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"

namespace relaycast {
namespace {

void require_non_negative(double x) {
  if (!(x >= 0.0)) {
    std::ostringstream msg;
    msg << "channel strength must be non-negative (got " << x << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
}

}  // namespace

FadingDistribution FadingDistribution::rayleigh() { return FadingDistribution{}; }

FadingDistribution FadingDistribution::gamma(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    std::ostringstream msg;
    msg << "gamma distribution needs alpha, beta > 0 (got " << alpha << ", " << beta << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  FadingDistribution dist;
  dist.kind_ = DistributionKind::gamma;
  dist.alpha_ = alpha;
  dist.beta_ = beta;
  dist.log_gamma_alpha_ = std::lgamma(alpha);
  return dist;
}

FadingDistribution FadingDistribution::tabulated(std::vector<double> x, std::vector<double> pdf,
                                                 double mass_below_first_knot) {
  if (x.size() < 2 || x.size() != pdf.size()) {
    throw Error(ErrorCode::invalid_table, "tabulated pdf needs >= 2 knots with matching sizes");
  }
  if (!(x.front() >= 0.0)) throw Error(ErrorCode::invalid_table, "tabulated pdf knots must be >= 0");
  for (double v : pdf) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::invalid_table, "tabulated pdf values must be finite and >= 0");
    }
  }
  if (!(mass_below_first_knot >= 0.0) || (x.front() == 0.0 && mass_below_first_knot > 0.0)) {
    throw Error(ErrorCode::invalid_table, "mass below the first knot needs a positive first knot");
  }

  FadingDistribution dist;
  dist.kind_ = DistributionKind::tabulated;
  dist.table_ = std::make_shared<const MonotoneCubic>(std::move(x), std::move(pdf));
  dist.mass_below_ = mass_below_first_knot;

  const double mass = mass_below_first_knot + dist.table_->integral(dist.table_->front(),
                                                                    dist.table_->back());
  if (!(mass >= 0.999 && mass <= 1.001)) {
    std::ostringstream msg;
    msg << "tabulated pdf has total mass " << mass << ", outside [0.999, 1.001]";
    throw Error(ErrorCode::invalid_table, msg.str());
  }
  dist.scale_ = 1.0 / mass;
  return dist;
}

FadingDistribution FadingDistribution::read_csv(std::istream& in) {
  const CsvTable table = read_csv_table(in);
  if (table.header.size() != 2 || table.header[0] != "x" || table.header[1] != "pdf") {
    throw Error(ErrorCode::invalid_table, "distribution CSV must have header `x,pdf`");
  }
  std::vector<double> x;
  std::vector<double> pdf;
  x.reserve(table.rows.size());
  pdf.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    x.push_back(row[0]);
    pdf.push_back(row[1]);
  }
  return tabulated(std::move(x), std::move(pdf));
}

FadingDistribution FadingDistribution::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return read_csv(in);
}

void FadingDistribution::write_csv(std::ostream& out) const {
  if (kind_ != DistributionKind::tabulated) {
    throw Error(ErrorCode::domain_error, "only tabulated distributions serialise to CSV");
  }
  out << "x,pdf\n";
  const auto xs = table_->x();
  const auto ys = table_->y();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << format_number(xs[i]) << ',' << format_number(ys[i] * scale_) << '\n';
  }
}

double FadingDistribution::pdf(double x) const {
  require_non_negative(x);
  switch (kind_) {
    case DistributionKind::rayleigh:
      return std::exp(-x);
    case DistributionKind::gamma:
      if (x == 0.0) {
        if (alpha_ < 1.0) return std::numeric_limits<double>::infinity();
        return alpha_ == 1.0 ? beta_ : 0.0;
      }
      return std::exp(log_pdf(x));
    case DistributionKind::tabulated:
      if (x < table_->front()) return scale_ * mass_below_ / table_->front();
      if (x > table_->back()) return 0.0;
      return scale_ * std::max(0.0, (*table_)(x));
  }
  return 0.0;
}

double FadingDistribution::log_pdf(double x) const {
  require_non_negative(x);
  switch (kind_) {
    case DistributionKind::rayleigh:
      return -x;
    case DistributionKind::gamma:
      if (x == 0.0) return std::log(pdf(x));
      return alpha_ * std::log(beta_) + (alpha_ - 1.0) * std::log(x) - beta_ * x - log_gamma_alpha_;
    case DistributionKind::tabulated:
      return std::log(pdf(x));
  }
  return 0.0;
}

double FadingDistribution::cdf(double x) const {
  require_non_negative(x);
  switch (kind_) {
    case DistributionKind::rayleigh:
      return -std::expm1(-x);
    case DistributionKind::gamma:
      if (x == 0.0) return 0.0;
      return 1.0 - survival(x);
    case DistributionKind::tabulated: {
      const double x0 = table_->front();
      if (x < x0) return scale_ * mass_below_ * x / x0;
      if (x >= table_->back()) return 1.0;
      return std::min(1.0, scale_ * (mass_below_ + table_->integral(x0, x)));
    }
  }
  return 0.0;
}

double FadingDistribution::survival(double x) const {
  require_non_negative(x);
  switch (kind_) {
    case DistributionKind::rayleigh:
      return std::exp(-x);
    case DistributionKind::gamma:
      if (x == 0.0) return 1.0;
      return upper_incomplete_gamma(alpha_, beta_ * x) * std::exp(-log_gamma_alpha_);
    case DistributionKind::tabulated:
      if (x >= table_->back()) return 0.0;
      if (x < table_->front()) return 1.0 - cdf(x);
      return std::max(0.0, scale_ * table_->integral(x, table_->back()));
  }
  return 0.0;
}

double FadingDistribution::support_lo() const noexcept {
  return kind_ == DistributionKind::tabulated ? table_->front() : 0.0;
}

double FadingDistribution::support_hi() const noexcept {
  return kind_ == DistributionKind::tabulated ? table_->back()
                                              : std::numeric_limits<double>::infinity();
}

std::string FadingDistribution::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case DistributionKind::rayleigh:
      out << "rayleigh";
      break;
    case DistributionKind::gamma:
      out << "gamma:" << format_number(alpha_) << ',' << format_number(beta_);
      break;
    case DistributionKind::tabulated:
      out << "tabulated(" << table_->x().size() << " knots)";
      break;
  }
  return out.str();
}

std::optional<Interval> GrowthRegion::region_of(double x) const {
  for (const auto& interval : intervals) {
    if (interval.contains(x)) return interval;
  }
  return std::nullopt;
}

GrowthRegion growth_regions(const FadingDistribution& dist) {
  switch (dist.kind()) {
    case DistributionKind::rayleigh:
      // d/dx (x^2 e^-x) = (2x - x^2) e^-x
      return GrowthRegion{{Interval{0.0, 2.0}}};
    case DistributionKind::gamma:
      // d/dx (x^(alpha+1) e^(-beta x)) = x^alpha e^(-beta x) (1 + alpha - beta x)
      return GrowthRegion{{Interval{0.0, (1.0 + dist.alpha()) / dist.beta()}}};
    case DistributionKind::tabulated:
      break;
  }

  const auto xs = dist.table()->x();
  const std::size_t n = xs.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = xs[i] * xs[i] * dist.pdf(xs[i]);
  std::vector<double> slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    slope[i] = (h[b] - h[a]) / (xs[b] - xs[a]);
  }

  auto crossing = [&](std::size_t i) {
    // Zero of the slope between knots i and i + 1, by linear interpolation.
    const double t = slope[i] / (slope[i] - slope[i + 1]);
    return xs[i] + t * (xs[i + 1] - xs[i]);
  };

  GrowthRegion region;
  std::size_t i = 0;
  while (i < n) {
    if (!(slope[i] > 0.0)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < n && slope[i] > 0.0) ++i;
    // A table with no mass below its first knot starts growing at that knot.
    const double lo = start != 0 ? crossing(start - 1) : (dist.pdf(0.0) > 0.0 ? 0.0 : xs[0]);
    const double hi = i == n ? xs[n - 1] : crossing(i - 1);
    if (lo < hi) region.intervals.push_back({lo, hi});
  }
  return region;
}

FadingDistribution parse_distribution(const std::string& spec) {
  if (spec == "rayleigh") return FadingDistribution::rayleigh();
  if (spec.rfind("gamma:", 0) == 0) {
    const std::string params = spec.substr(6);
    const auto comma = params.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::usage, "gamma distribution spec must be gamma:alpha,beta");
    }
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      const std::string a_text = params.substr(0, comma);
      const std::string b_text = params.substr(comma + 1);
      const double alpha = std::stod(a_text, &used_a);
      const double beta = std::stod(b_text, &used_b);
      if (used_a != a_text.size() || used_b != b_text.size()) throw std::invalid_argument(spec);
      return FadingDistribution::gamma(alpha, beta);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::usage, "cannot parse gamma parameters in '" + spec + "'");
    }
  }
  if (spec.rfind("csv:", 0) == 0) return FadingDistribution::load_csv(spec.substr(4));
  throw Error(ErrorCode::usage,
              "unknown distribution '" + spec + "' (expected rayleigh, gamma:a,b or csv:path)");
}

}  // namespace relaycast
