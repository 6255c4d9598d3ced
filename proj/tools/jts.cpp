#include <CLI11.hpp>

#include <iostream>

#include "jts/commands.hpp"
#include "jts/error.hpp"

namespace {

void print_error(const jts::Error& e) {
  jts::Json j;
  j["error"] = jts::to_string(e.code());
  if (!e.condition().empty()) j["condition"] = e.condition();
  if (e.index()) j["index"] = *e.index();
  j["message"] = e.what();
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-spectra inverse problem for limit-circle Jacobi matrices"};
  app.require_subcommand(1);
  app.fallthrough();

  jts::GlobalOptions g;
  g.bits = jts::default_precision_from_env();
  double tolerance = 0;
  app.add_option("--precision-bits", g.bits, "Working precision in bits (env JTS_PRECISION_BITS)")
      ->check(CLI::Range(jts::kMinPrecisionBits, 1L << 20));
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Coefficient tolerance (roundtrip, invert stability)")
                      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output path; stdout when absent");
  app.add_flag("--quiet", g.quiet, "No summary on stderr");

  jts::FamilyParams family;
  std::string family_name = "geometric";
  std::size_t length = 40;
  const auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", family_name, "geometric | geometric_shifted | custom");
    sub->add_option("--ratio", family.ratio, "c in b_n = c^n");
    sub->add_option("--shift", family.shift, "s in q_n = s(-1)^n for geometric_shifted");
    sub->add_option("--b", family.b, "custom b values")->delimiter(',');
    sub->add_option("--q", family.q, "custom q values")->delimiter(',');
    sub->add_option("--length", length, "Number of matrix entries N");
  };

  auto* gen = app.add_subcommand("gen", "Generate a limit-circle matrix file");
  add_family(gen);

  std::string matrix_path, tau = "inf", window;
  auto* forward = app.add_subcommand("forward", "Spectrum of one self-adjoint extension");
  forward->add_option("matrix", matrix_path, "Matrix file")->required();
  forward->add_option("--tau", tau, "Extension parameter: decimal or inf");
  auto* fwd_window = forward->add_option("--window", window, "lo:hi, default the trust window (use --window=lo:hi)");

  std::string lambda_path, mu_path;
  std::size_t target_length = 10;
  auto* invert = app.add_subcommand("invert", "Recover the matrix and both parameters from two spectra");
  invert->add_option("lambda", lambda_path, "Spectrum file without 0")->required();
  invert->add_option("mu", mu_path, "Second spectrum file")->required();
  invert->add_option("--target-length", target_length, "Coefficient pairs to recover");

  auto* validate = app.add_subcommand("validate", "Check two sequences against the characterization");
  validate->add_option("lambda", lambda_path, "Spectrum file")->required();
  validate->add_option("mu", mu_path, "Spectrum file")->required();

  jts::RoundtripParams rt;
  auto* roundtrip = app.add_subcommand("roundtrip", "gen, forward twice, validate, invert and compare");
  add_family(roundtrip);
  roundtrip->add_option("--tau1", rt.tau1, "Parameter of the first spectrum");
  roundtrip->add_option("--tau2", rt.tau2, "Parameter of the second spectrum");
  auto* rt_window = roundtrip->add_option("--window", window, "lo:hi, default the trust window");
  roundtrip->add_option("--target-length", rt.target_length, "Coefficient pairs to recover");

  jts::PlotParams plot;
  std::string kind = "R_function", grid;
  auto* plot_cmd = app.add_subcommand("plot-data", "CSV for plotting");
  plot_cmd->add_option("--kind", kind, "R_function | measure_staircase | eigenvalue_ladder");
  plot_cmd->add_option("inputs", plot.inputs, "Matrix file, or one or two spectrum files")->required();
  plot_cmd->add_option("--tau", plot.tau, "Extension parameter for R_function");
  auto* grid_opt = plot_cmd->add_option("--grid", grid, "lo:hi:count (use --grid=lo:hi:count)");
  plot_cmd->add_option("--at", plot.points, "Explicit sample points")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (*tol_opt) g.tolerance = tolerance;
    family.family = jts::parse_family(family_name);
    jts::CommandResult result;
    if (*gen) {
      result = jts::cmd_gen(g, family, length);
    } else if (*forward) {
      result = jts::cmd_forward(g, matrix_path, tau,
                                *fwd_window ? std::optional<std::string>(window) : std::nullopt);
    } else if (*invert) {
      result = jts::cmd_invert(g, lambda_path, mu_path, target_length);
    } else if (*validate) {
      result = jts::cmd_validate(g, lambda_path, mu_path);
    } else if (*roundtrip) {
      rt.family = family;
      rt.length = length;
      if (*rt_window) rt.window = window;
      result = jts::cmd_roundtrip(g, rt);
    } else if (*plot_cmd) {
      plot.kind = jts::parse_plot_kind(kind);
      if (*grid_opt) plot.grid = grid;
      result = jts::cmd_plot_data(g, plot);
    }
    jts::deliver(g, result);
    return result.exit_code;
  } catch (const jts::Error& e) {
    print_error(e);
    return jts::exit_status(e.code());
  } catch (const std::exception& e) {
    print_error(jts::Error(jts::ErrorCode::InvariantViolated, e.what()));
    return 3;
  }
}
