#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "braid/errors.hpp"
#include "scenario.hpp"

// Exit status: 0 all selected checks pass, 1 some check fails,
// 2 usage, schema or missing-section errors.
int main(int argc, char** argv) {
  using namespace braid;
  CLI::App app{"braidcheck: run verification suites on a scenario file"};
  app.require_subcommand(1, 1);

  scenario::Params overrides;
  std::string file;
  std::string format = "text";
  bool timing = false;
  std::string chosen;

  for (const auto& name : scenario::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " suites");
    sub->add_option("scenario", file, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--depth", overrides.depth, "verification depth D")->check(CLI::NonNegativeNumber);
    sub->add_option("--degree", overrides.degree, "coefficient degree of generated families")->check(CLI::NonNegativeNumber);
    sub->add_option("--order", overrides.order, "truncation order N of hbar series")->check(CLI::PositiveNumber);
    sub->add_option("--seed", overrides.seed, "seed for randomized checks");
    sub->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_flag("--timing", timing, "include per-check timings");
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(file);
  std::stringstream text;
  text << in.rdbuf();
  try {
    const scenario::Spec spec = scenario::parse_spec(text.str());
    const scenario::Settings settings = scenario::resolve(spec, overrides);
    const scenario::Model model(spec, settings);
    const Report report = scenario::run(model, chosen);
    if (format == "structured")
      std::cout << scenario::render_structured(report, chosen, settings, timing).dump(2) << "\n";
    else
      std::cout << scenario::render_text(report, timing);
    return report.all_pass() && report.skipped().empty() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
