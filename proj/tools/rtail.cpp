#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rtail/error.hpp"
#include "rtail_cli/commands.hpp"
#include "rtail_cli/config.hpp"

using namespace rtail;
using namespace rtail::cli;

int main(int argc, char** argv) {
  CLI::App app{"rtail: tails of the batch-arrival retrial queue"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;

  auto* exact = app.add_subcommand("exact", "exact truncated distributions as CSV");
  exact->add_option("--config", config_path, "model config file")->required();
  exact->add_option("--out", out, "output CSV")->required();

  AsymOptions asym_opts;
  auto* asym = app.add_subcommand("asym", "asymptotic constants and tail curves");
  asym->add_option("--config", config_path, "model config file")->required();
  asym->add_option("--out", out, "output CSV")->required();
  asym->add_option("--j-min", asym_opts.j_min, "first grid point");
  asym->add_option("--j-max", asym_opts.j_max, "last grid point (default exact.trunc)");
  asym->add_option("--points", asym_opts.points, "grid size");

  auto* sim = app.add_subcommand("sim", "replicated discrete-event simulation");
  sim->add_option("--config", config_path, "model config file")->required();
  sim->add_option("--out", out, "output CSV")->required();

  std::string svg, sim_csv;
  auto* compare = app.add_subcommand("compare", "exact vs asymptotic comparison report");
  compare->add_option("--config", config_path, "model config file")->required();
  compare->add_option("--out", out, "output JSON report")->required();
  compare->add_option("--svg", svg, "optional log-log plot");
  compare->add_option("--sim-csv", sim_csv, "CSV written by `rtail sim`");

  Lemma61Options lemma;
  auto* lemma61 = app.add_subcommand("check-lemma61", "second-order convolution tail check");
  lemma61->add_option("--f1", lemma.f1, "law of X1, e.g. paretotail:theta=1,d=1.5")->required();
  lemma61->add_option("--f2", lemma.f2, "law of X2, e.g. paretotail:theta=1,d=2.5")->required();
  lemma61->add_option("--t", lemma.t, "evaluation points")->required()->delimiter(',');
  lemma61->add_option("--trunc", lemma.trunc, "series truncation");
  lemma61->add_option("--out", out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*lemma61) return cmd_check_lemma61(lemma, out);
    const RunConfig config = load_config(config_path);
    if (*exact) return cmd_exact(config, out);
    if (*asym) return cmd_asym(config, out, asym_opts);
    if (*sim) return cmd_sim(config, out);
    CompareOptions opts;
    if (!svg.empty()) opts.svg = svg;
    if (!sim_csv.empty()) opts.sim_csv = sim_csv;
    return cmd_compare(config, out, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfig;
  } catch (const StabilityError& e) {
    std::cerr << "unstable model: " << e.what() << '\n';
    return kStability;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const UnsupportedModelError& e) {
    std::cerr << "unsupported model: " << e.what() << '\n';
    return kUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
