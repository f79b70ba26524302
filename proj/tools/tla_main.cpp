#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tla/tla.h"

namespace {

struct Args {
  std::string config;
  std::string out;
  uint64_t seed = 0;
  int steps = 0;
  double tol = 0.0;
  bool family = false;
  bool appendix = false;
};

int report(tla_status s, const std::string& msg) {
  std::cerr << "error (" << tla_status_name(s) << "): " << msg << "\n";
  return static_cast<int>(s);
}

int run(const std::string& command, const Args& args, const CLI::App& sub) {
  std::string config = "{}";
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) return report(TLA_ERR_CONFIG, "cannot read configuration '" + args.config + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    config = ss.str();
  }
  if (args.appendix) {
    auto j = nlohmann::json::parse(config, nullptr, false);
    if (!j.is_object()) return report(TLA_ERR_CONFIG, "configuration must be a JSON object");
    j["selftest"]["suites"] = nlohmann::json::array({"groupoid-alg"});
    config = j.dump();
  }
  std::string out_path = args.out;
  if (out_path.empty()) {
    auto j = nlohmann::json::parse(config, nullptr, false);
    if (j.is_object() && j.contains("output") && j["output"].is_object() && j["output"].contains("path") &&
        j["output"]["path"].is_string())
      out_path = j["output"]["path"].get<std::string>();
  }
  tla_overrides ov{};
  ov.has_seed = sub.count("--seed") > 0;
  ov.seed = args.seed;
  ov.has_steps = sub.count("--steps") > 0;
  ov.steps = args.steps;
  ov.has_tol = sub.count("--tol") > 0;
  ov.tol = args.tol;
  ov.family = args.family ? 1 : 0;

  char* text = nullptr;
  tla_status s = tla_run_command(command.c_str(), config.c_str(), &ov, &text);
  if (text) {
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << text;
      if (!out) {
        tla_string_free(text);
        return report(TLA_ERR_CONFIG, "cannot write output '" + out_path + "'");
      }
    }
    tla_string_free(text);
  }
  if (s != TLA_OK) return report(s, tla_last_error());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transitive Lie algebroids over the sphere: classification, monodromy and integration"};
  app.require_subcommand(1);
  Args args;
  const std::pair<const char*, const char*> commands[] = {
      {"classify", "Classifying central element c(A) of a presentation"},
      {"monodromy", "Monodromy lattice and discreteness, or a family scan with --family"},
      {"transport", "Parallel transport trace along a path as CSV"},
      {"integrate", "Randomized checks of the integrating groupoid laws"},
      {"selftest", "Invariant checks across all modules"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "Seed for randomized checks");
    sub->add_option("--steps", args.steps, "Sweep steps")->check(CLI::PositiveNumber);
    sub->add_option("--tol", args.tol, "Central and equality tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--family", args.family, "Scan the family section for local uniform discreteness");
    sub->add_option("--out", args.out, "Write the result here instead of stdout");
    if (std::string(name) == "selftest")
      sub->add_flag("--appendix", args.appendix, "Run only the exhaustive finite groupoid suite");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(TLA_ERR_CONFIG);
  }
  for (CLI::App* sub : app.get_subcommands()) return run(sub->get_name(), args, *sub);
  return static_cast<int>(TLA_ERR_CONFIG);
}
