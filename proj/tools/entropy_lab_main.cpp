#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "entropy_lab/error.hpp"
#include "entropy_lab/report.hpp"

namespace el = entropy_lab;

namespace {

std::string dashed(std::string name) {
  for (char& c : name)
    if (c == '_') c = '-';
  return name;
}

struct CommandOptions {
  el::Command command;
  CLI::App* app;
  std::map<std::string, std::string> raw;  // schema name -> flag text
  std::string out = "report";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string format = "csv";
};

const char* describe(el::Command c) {
  switch (c) {
    case el::Command::kEllipsoid: return "entropy expansions from an eigenvalue model";
    case el::Command::kCounting: return "entropy expansions from a counting-function model";
    case el::Command::kCarl: return "geometric-mean (Carl) bound on entropy numbers of a spectrum";
    case el::Command::kInvert: return "first- and second-order inversion of a counting model";
    case el::Command::kCover: return "covering-number sandwich for an ellipsoid";
    case el::Command::kLps: return "time-frequency limiting spectrum, counts and entropy rate";
    case el::Command::kSobolev: return "Sobolev embedding entropy on a box domain";
    case el::Command::kValidate: return "run the acceptance criteria";
  }
  return "";
}

void print_validation(const el::Json& results) {
  for (const auto& c : results.at("criteria")) {
    std::printf("criterion %d %-4s %s: %s\n", c.at("id").get<int>(),
                c.at("status").get<std::string>().c_str(),
                c.at("name").get<std::string>().c_str(),
                c.at("detail").get<std::string>().c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric entropy of compact operators and ellipsoids: two-term "
               "expansions, covering bounds and numerical spectra."};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<CommandOptions>> commands;
  for (el::Command c : el::all_commands()) {
    auto opts = std::make_unique<CommandOptions>();
    opts->command = c;
    opts->app = app.add_subcommand(el::to_string(c), describe(c));
    for (const auto& spec : el::command_schema(c)) {
      std::string help = spec.help;
      if (spec.required) help += " (required)";
      else if (!spec.default_value.is_null())
        help += " [default: " + spec.default_value.dump() + "]";
      opts->app->add_option("--" + dashed(spec.name), opts->raw[spec.name], help);
    }
    opts->app->add_option("--out", opts->out, "output directory")->capture_default_str();
    opts->app->add_option("--seed", opts->seed, "seed for randomized checks")
        ->capture_default_str();
    opts->app->add_option("--threads", opts->threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opts->app->add_option("--format", opts->format, "table encoding")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    commands.push_back(std::move(opts));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (const auto& opts : commands) {
    if (!opts->app->parsed()) continue;
    el::RunConfig cfg;
    cfg.command = opts->command;
    for (const auto& spec : el::command_schema(opts->command))
      if (opts->app->count("--" + dashed(spec.name)) > 0)
        cfg.params[spec.name] = opts->raw[spec.name];
    cfg.output_dir = opts->out;
    cfg.seed = opts->seed;
    cfg.threads = opts->threads;
    try {
      cfg.format = el::table_format_from_string(opts->format);
      const el::ReportBundle bundle = el::run(cfg);
      if (cfg.command == el::Command::kValidate)
        print_validation(bundle.summary.at("results"));
      std::printf("wrote %s\n", (cfg.output_dir / "summary.json").string().c_str());
      return 0;
    } catch (const el::Error& e) {
      std::fprintf(stderr, "error [%s]: %s\n", std::string(el::to_string(e.kind())).c_str(),
                   e.what());
      return el::exit_code_for(e);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  return 1;
}
