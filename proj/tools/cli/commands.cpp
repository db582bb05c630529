#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "relaycast/af_baseline.hpp"
#include "relaycast/csv.hpp"
#include "relaycast/error.hpp"
#include "relaycast/first_hop.hpp"
#include "relaycast/second_hop.hpp"
#include "relaycast/single_layer.hpp"
#include "svg_plot.hpp"

namespace relaycast::cli {
namespace {

struct SweepPoint {
  double pr_db;
  double b;
};

std::vector<SweepPoint> sweep(const ScenarioConfig& config) {
  std::vector<double> prs = config.pr_db;
  std::vector<double> bs = config.b;
  std::sort(prs.begin(), prs.end());
  prs.erase(std::unique(prs.begin(), prs.end()), prs.end());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  std::vector<SweepPoint> points;
  for (double pr : prs) {
    for (double b : bs) points.push_back({pr, b});
  }
  return points;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  const unsigned threads =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), static_cast<unsigned>(n));
  if (threads <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
}

std::string cell(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

void require_single(const ScenarioConfig& config, const char* command) {
  if (config.pr_db.size() != 1 || config.b.size() != 1) {
    throw Error(ErrorCode::usage,
                std::string(command) + " takes a single --pr-db value and a single --b value");
  }
}

bool is_rayleigh(const FadingDistribution& dist) { return dist.kind() == DistributionKind::rayleigh; }

GridSpec grid_of(const ScenarioConfig& config) {
  GridSpec grid;
  grid.points = config.grid;
  return grid;
}

}  // namespace

void cmd_second_hop(const ScenarioConfig& config, std::ostream& out, std::ostream&) {
  require_single(config, "second-hop");
  const FadingDistribution dist = parse_distribution(config.hop2_dist);
  const double b = config.b.front();
  const GProfile profile = build_g_profile(dist, db_to_linear(config.pr_db.front()), b, grid_of(config));
  profile.write_csv(out);
  try {
    const ParametricFit fit = fit_g_parametric(profile);
    out << "# p_r=" << format_number(fit.p_r) << ",B=" << format_number(fit.B)
        << ",rms=" << format_number(fit.rms_rel) << '\n';
  } catch (const Error& e) {
    out << "# fit unavailable: " << e.what() << '\n';
  }
  out << "# growth_region=";
  const GrowthRegion regions = growth_regions(dist);
  for (std::size_t i = 0; i < regions.intervals.size(); ++i) {
    if (i > 0) out << ';';
    out << format_number(regions.intervals[i].lo) << ',' << format_number(regions.intervals[i].hi);
  }
  out << '\n';
}

void cmd_e2e(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  require_single(config, "e2e");
  const FadingDistribution hop1 = parse_distribution(config.hop1_dist);
  const FadingDistribution hop2 = parse_distribution(config.hop2_dist);
  const EndToEndSolution solution =
      solve_decode_forward(hop1, hop2, db_to_linear(config.pt_db), db_to_linear(config.pr_db.front()),
                           config.b.front(), grid_of(config));
  solution.write_csv(out);
  for (const auto& warning : solution.warnings) err << "warning: " << warning << '\n';
}

void cmd_af(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  const FadingDistribution hop1 = parse_distribution(config.hop1_dist);
  const FadingDistribution hop2 = parse_distribution(config.hop2_dist);
  if (!is_rayleigh(hop1) || !is_rayleigh(hop2)) {
    throw Error(ErrorCode::usage, "the AF equivalent channel is defined for Rayleigh hops only");
  }
  const double P_t = db_to_linear(config.pt_db);
  if (!config.channel.empty()) {
    if (config.pr_db.size() != 1) {
      throw Error(ErrorCode::usage, "--channel needs a single --pr-db value");
    }
    std::ofstream file(config.channel);
    if (!file) throw Error(ErrorCode::io_error, "cannot write " + config.channel);
    EquivalentChannel::build(P_t, db_to_linear(config.pr_db.front())).write_csv(file);
  }

  const auto points = sweep(config);
  std::vector<std::optional<AllocationSolution>> results(points.size());
  std::vector<std::string> failures(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      results[i] = af_expected_distortion(P_t, db_to_linear(points[i].pr_db), points[i].b);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  out << "pr_db,b,distortion,x1,x2\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_number(points[i].pr_db) << ',' << format_number(points[i].b) << ',';
    if (results[i]) {
      out << format_number(results[i]->expected_distortion) << ',' << format_number(results[i]->x1)
          << ',' << format_number(results[i]->x2) << '\n';
    } else {
      out << ",,\n";
      err << "warning: pr_db=" << format_number(points[i].pr_db) << " b=" << format_number(points[i].b)
          << ": " << failures[i] << '\n';
    }
  }
}

void cmd_single_layer(const ScenarioConfig& config, std::ostream& out, std::ostream&) {
  const FadingDistribution hop1 = parse_distribution(config.hop1_dist);
  const FadingDistribution hop2 = parse_distribution(config.hop2_dist);
  const double P_t = db_to_linear(config.pt_db);
  const auto points = sweep(config);
  std::vector<SingleLayerResult> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    results[i] = single_layer_distortion(hop1, hop2, P_t, db_to_linear(points[i].pr_db), points[i].b);
  });
  out << "pr_db,b,distortion,gamma0,l0\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_number(points[i].pr_db) << ',' << format_number(points[i].b) << ','
        << format_number(results[i].distortion) << ',' << format_number(results[i].gamma0) << ','
        << format_number(results[i].l0) << '\n';
  }
}

void cmd_compare(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  const FadingDistribution hop1 = parse_distribution(config.hop1_dist);
  const FadingDistribution hop2 = parse_distribution(config.hop2_dist);
  const bool af_defined = is_rayleigh(hop1) && is_rayleigh(hop2);
  if (!af_defined) err << "warning: AF column left empty (defined for Rayleigh hops only)\n";
  const double P_t = db_to_linear(config.pt_db);
  const GridSpec grid = grid_of(config);

  struct Row {
    std::optional<double> df;
    std::optional<double> af;
    std::optional<double> single_layer;
    std::vector<std::string> failures;
  };
  const auto points = sweep(config);
  std::vector<Row> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const double P_r = db_to_linear(points[i].pr_db);
    const double b = points[i].b;
    Row& row = rows[i];
    try {
      row.df = solve_decode_forward(hop1, hop2, P_t, P_r, b, grid).expected_distortion;
    } catch (const Error& e) {
      row.failures.push_back(std::string("df_multilayer: ") + e.what());
    }
    if (af_defined) {
      try {
        row.af = af_expected_distortion(P_t, P_r, b).expected_distortion;
      } catch (const Error& e) {
        row.failures.push_back(std::string("af: ") + e.what());
      }
    }
    try {
      row.single_layer = single_layer_distortion(hop1, hop2, P_t, P_r, b).distortion;
    } catch (const Error& e) {
      row.failures.push_back(std::string("single_layer: ") + e.what());
    }
  });

  out << "pr_db,b,df_multilayer,af,single_layer\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_number(points[i].pr_db) << ',' << format_number(points[i].b) << ','
        << cell(rows[i].df) << ',' << cell(rows[i].af) << ',' << cell(rows[i].single_layer) << '\n';
    for (const auto& failure : rows[i].failures) {
      err << "warning: pr_db=" << format_number(points[i].pr_db) << " b=" << format_number(points[i].b)
          << ": " << failure << '\n';
    }
  }

  if (config.svg.empty()) return;
  std::vector<double> bs;
  for (const auto& p : points) {
    if (std::find(bs.begin(), bs.end(), p.b) == bs.end()) bs.push_back(p.b);
  }
  static const char* const kDashes[] = {"", "7 4", "2 3", "9 3 2 3"};
  const struct {
    const char* name;
    const char* color;
    std::optional<double> Row::*field;
  } methods[] = {{"DF multi-layer", "#1f5fbf", &Row::df},
                 {"AF", "#c0392b", &Row::af},
                 {"single-layer", "#2e8b3a", &Row::single_layer}};
  std::vector<Series> series;
  for (const auto& method : methods) {
    if (method.field == &Row::af && !af_defined) continue;
    for (std::size_t k = 0; k < bs.size(); ++k) {
      Series s;
      s.label = std::string(method.name) + ", b=" + format_number(bs[k]);
      s.color = method.color;
      s.dash = kDashes[k % 4];
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].b != bs[k]) continue;
        const auto& value = rows[i].*(method.field);
        s.points.emplace_back(points[i].pr_db,
                              value ? *value : std::numeric_limits<double>::quiet_NaN());
      }
      series.push_back(std::move(s));
    }
  }
  PlotSpec spec;
  spec.title = "Expected distortion, source SNR " + format_number(config.pt_db) + " dB";
  spec.x_label = "relay SNR (dB)";
  spec.y_label = "expected distortion";
  std::ofstream file(config.svg);
  if (!file) throw Error(ErrorCode::io_error, "cannot write " + config.svg);
  write_svg(file, spec, series);
}

void cmd_fit_report(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  const FadingDistribution hop2 = parse_distribution(config.hop2_dist);
  const GridSpec grid = grid_of(config);
  struct Report {
    std::optional<ParametricFit> fit;
    std::optional<double> closed_form;
    std::size_t active = 0;
    std::string failure;
  };
  const auto points = sweep(config);
  std::vector<Report> reports(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      const GProfile profile =
          build_g_profile(hop2, db_to_linear(points[i].pr_db), points[i].b, grid, 1);
      reports[i].active = profile.active_count();
      reports[i].fit = fit_g_parametric(profile);
      reports[i].closed_form = closed_form_rms(profile, *reports[i].fit);
    } catch (const Error& e) {
      reports[i].failure = e.what();
    }
  });
  out << "pr_db,b,p_r,B,rms_rel,g_offset,closed_form_rms,active_points\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Report& r = reports[i];
    out << format_number(points[i].pr_db) << ',' << format_number(points[i].b) << ',';
    if (r.fit) {
      out << format_number(r.fit->p_r) << ',' << format_number(r.fit->B) << ','
          << format_number(r.fit->rms_rel) << ',' << format_number(r.fit->g_offset) << ','
          << cell(r.closed_form);
    } else {
      out << ",,,,";
      err << "warning: pr_db=" << format_number(points[i].pr_db) << " b=" << format_number(points[i].b)
          << ": " << r.failure << '\n';
    }
    out << ',' << r.active << '\n';
  }
}

}  // namespace relaycast::cli
