// nlms <command> --config <path> [--out <dir>]
#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "nlms/config.hpp"
#include "nlms/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lattice s-minimal sets in cylinders: exact minimization and verifiers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  const char* names[] = {"minimize", "curvature-scan", "lemma-check", "slide", "verify"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
  }

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();

  std::string text;
  try {
    text = nlms::read_text_file(config_path);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  nlms::ParseOutcome parsed = nlms::parse_config(text);
  if (!parsed.config) {
    for (auto& e : parsed.errors) {
      if (e.line)
        std::fprintf(stderr, "config error (line %d): %s\n", e.line, e.message.c_str());
      else
        std::fprintf(stderr, "config error: %s\n", e.message.c_str());
    }
    return 2;
  }
  nlms::RunConfig cfg = *parsed.config;
  cfg.command = *nlms::command_from_name(cmd);
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  nlms::RunResult rr = nlms::run(cfg);
  for (auto& a : rr.artifacts) std::printf("wrote %s\n", a.c_str());
  if (rr.exit_code != 0) std::fprintf(stderr, "run finished with status %d\n", rr.exit_code);
  return rr.exit_code;
}
