#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "relaycast/error.hpp"

namespace relaycast::cli {
namespace {

using Command = void (*)(const ScenarioConfig&, std::ostream&, std::ostream&);

struct Subcommand {
  const char* name;
  const char* help;
  Command command;
};

constexpr std::array<Subcommand, 6> kSubcommands = {{
    {"second-hop", "Relay-side G(D_r) profile and parametric fit", cmd_second_hop},
    {"e2e", "End-to-end decode-and-forward layering", cmd_e2e},
    {"af", "Amplify-and-forward baseline", cmd_af},
    {"single-layer", "Single-layer outage baseline", cmd_single_layer},
    {"compare", "DF vs AF vs single-layer over a relay SNR sweep", cmd_compare},
    {"fit-report", "Parametric G_D fit quality per sweep point", cmd_fit_report},
}};

// Splices `key=value` lines from --config right after the subcommand, so
// flags given on the command line come later and win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::any_of(kSubcommands.begin(), kSubcommands.end(),
                       [&](const Subcommand& s) { return a == s.name; });
  });
  if (sub == args.end()) return args;
  const std::vector<std::string> from_file = read_config_file(path);
  args.insert(sub + 1, from_file.begin(), from_file.end());
  return args;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  std::string pr_text = "20";
  std::string b_text = "1";
  std::string config_path;
  int grid = 120;

  CLI::App app{"Expected distortion of layered Gaussian source coding over a two-hop relay link",
               "relaycast"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Command selected = nullptr;
  for (const auto& entry : kSubcommands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.help);
    sub->add_option("--pt-db", config.pt_db, "Source transmit SNR in dB")->capture_default_str();
    sub->add_option("--pr-db", pr_text, "Relay SNR in dB: value or lo:hi:step")->capture_default_str();
    sub->add_option("--b", b_text, "Mismatch factor(s), comma separated")->capture_default_str();
    sub->add_option("--hop1-dist", config.hop1_dist, "rayleigh | gamma:a,b | csv:path")
        ->capture_default_str();
    sub->add_option("--hop2-dist", config.hop2_dist, "rayleigh | gamma:a,b | csv:path")
        ->capture_default_str();
    sub->add_option("--grid", grid, "D_r profile grid size")->check(CLI::Range(2, 100000))
        ->capture_default_str();
    sub->add_option("--out", config.out, "Output file (default stdout)");
    sub->add_option("--config", config_path, "key=value file mirroring the flags");
    if (std::string(entry.name) == "compare") {
      sub->add_option("--svg", config.svg, "Write an SVG plot of the sweep");
    }
    if (std::string(entry.name) == "af") {
      sub->add_option("--channel", config.channel, "Write the equivalent channel as s,pdf,cdf");
    }
    const Command command = entry.command;
    sub->callback([&selected, command] { selected = command; });
  }

  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::usage ? 2 : 1;
  }

  try {
    config.pr_db = parse_range(pr_text);
    config.b = parse_b_list(b_text);
    config.grid = static_cast<std::size_t>(grid);

    std::ostringstream buffer;
    selected(config, buffer, err);
    if (config.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(config.out);
      if (!file) throw Error(ErrorCode::io_error, "cannot write " + config.out);
      file << buffer.str();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::usage ? 2 : 1;
  }
  return 0;
}

}  // namespace relaycast::cli
