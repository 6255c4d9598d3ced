#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jts/families.hpp"
#include "jts/files.hpp"
#include "jts/inverse.hpp"
#include "jts/nevanlinna.hpp"
#include "jts/validate.hpp"

namespace jts {

struct GlobalOptions {
  Precision bits = kDefaultPrecisionBits;
  std::optional<double> tolerance;  // roundtrip coefficient threshold, invert stability cut
  std::string out;                  // empty: stdout
  bool quiet = false;
};

struct Window {
  BigReal lo;
  BigReal hi;
};

// "lo:hi", either side a decimal.
Window parse_window(const std::string& text, Precision bits);

// What a subcommand produced: the document to write, its exit status and a one-line
// human summary for stderr.
struct CommandResult {
  std::string text;
  int exit_code = 0;
  std::string summary;
};

// Writes to opts.out atomically, or to stdout, and prints the summary unless quiet.
void deliver(const GlobalOptions& opts, const CommandResult& result);

// Library entry points behind the subcommands.
MatrixFile generate_matrix_file(const FamilyParams& params, std::size_t length, Precision bits);
// Default window is the symmetric trust window.
SpectrumFile forward_spectrum(const JacobiMatrix& m, const ExtensionParameter& tau,
                              const std::optional<Window>& window);
Json validation_to_json(const ValidationResult& v);
Json reconstruction_to_json(const ReconstructionResult& r);

CommandResult cmd_gen(const GlobalOptions& opts, const FamilyParams& params, std::size_t length);
CommandResult cmd_forward(const GlobalOptions& opts, const std::string& matrix_path, const std::string& tau,
                          const std::optional<std::string>& window);
CommandResult cmd_invert(const GlobalOptions& opts, const std::string& lambda_path, const std::string& mu_path,
                         std::size_t target_length);
CommandResult cmd_validate(const GlobalOptions& opts, const std::string& lambda_path, const std::string& mu_path);

struct RoundtripParams {
  FamilyParams family;
  std::size_t length = 40;
  std::string tau1 = "1";
  std::string tau2 = "inf";
  std::optional<std::string> window;
  std::size_t target_length = 10;
};

inline constexpr double kRoundtripCoefficientTolerance = 1e-8;
inline constexpr double kRoundtripTauTolerance = 1e-6;

CommandResult cmd_roundtrip(const GlobalOptions& opts, const RoundtripParams& params);

enum class PlotKind { RFunction, MeasureStaircase, EigenvalueLadder };
PlotKind parse_plot_kind(const std::string& name);

struct PlotParams {
  PlotKind kind = PlotKind::RFunction;
  std::vector<std::string> inputs;
  std::string tau = "inf";          // R_function
  std::optional<std::string> grid;  // R_function: "lo:hi:count"
  std::vector<std::string> points;  // R_function: explicit sample points
};

CommandResult cmd_plot_data(const GlobalOptions& opts, const PlotParams& params);

}  // namespace jts
