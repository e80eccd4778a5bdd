#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "symflow/campaign.hpp"
#include "symflow/errors.hpp"
#include "symflow/solutions.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symmetry, reduction and hodograph checks for the modified shallow-water system"};
  app.set_version_flag("--version", std::string(symflow::kVersion));

  std::string command;
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool list_catalog = false;
  bool csv = false;
  double H = 1.0;

  app.add_option("command", command,
                 "verify-symmetries, classify, reduce, invert, simulate or audit");
  auto* config_opt = app.add_option("--config", config, "JSON campaign configuration");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--out", out_dir, "Directory for report and CSV artifacts");
  app.add_flag("--csv", csv, "Also write a one-row-per-check CSV summary");
  app.add_flag("--list-catalog", list_catalog, "Print catalog ids and exit");
  app.add_option("--H", H, "Mean depth used by --list-catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_catalog) {
      symflow::FluidParams params;
      params.H = H;
      for (const auto& e : symflow::catalog(params)) {
        std::cout << e.id << (e.audit_failed ? "  (audit)" : "") << "  " << e.description << '\n';
      }
      return 0;
    }
    if (command.empty()) {
      std::cerr << "symflow: a command is required\n" << app.help();
      return 2;
    }
    symflow::Campaign campaign;
    if (config_opt->count() > 0) {
      campaign = symflow::load_config(config);
    }
    const symflow::Command cmd = symflow::parse_command(command);
    if (config_opt->count() > 0 && campaign.command != cmd) {
      throw symflow::ConfigError("config command '" + symflow::command_name(campaign.command) +
                                 "' does not match '" + command + "'");
    }
    campaign.command = cmd;
    if (seed_opt->count() > 0) campaign.seed = seed;
    if (app.get_option("--out")->count() > 0) campaign.out_dir = out_dir;

    const symflow::Report report = symflow::run(campaign);
    const std::string path = symflow::emit_report(report, symflow::ReportFormat::Json, out_dir);
    if (csv) symflow::emit_report(report, symflow::ReportFormat::CsvSummary, out_dir);
    for (const auto& c : report.checks) {
      std::cout << symflow::status_name(c.status) << "  " << c.name << "  " << c.value << '\n';
    }
    std::cout << "pass " << report.count(symflow::CheckStatus::Pass) << ", flag "
              << report.count(symflow::CheckStatus::Flag) << ", fail "
              << report.count(symflow::CheckStatus::Fail) << "; report " << path << '\n';
    return report.ok() ? 0 : 1;
  } catch (const symflow::Error& e) {
    std::cerr << "symflow: " << e.what() << '\n';
    return 2;
  }
}
