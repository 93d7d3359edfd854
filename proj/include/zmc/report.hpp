#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zmc/classify.hpp"

namespace zmc {

using ojson = nlohmann::ordered_json;

/// Everything a subcommand needs. Unset optionals fall back to family
/// defaults; a config file fills them first and flags override.
struct RunConfig {
  std::string family;
  std::optional<double> a, b, delta, p, c, r0;
  std::string variant;
  std::optional<Window> p1, p2;
  std::optional<double> tol;
  std::string out;
  std::string json_out;
  int threads = 1;
};

/// "lo:hi:count".
Window parse_range(const std::string& s);

/// Reads the keys a config file may set; throws InvalidParams on unknown keys.
RunConfig config_from_json(const ojson& j);
/// Fields set in `over` replace those in `base`.
RunConfig merge_config(RunConfig base, const RunConfig& over);

SurfaceFamily make_family(const RunConfig& cfg);
ParamWindow resolve_window(const SurfaceFamily& f, const RunConfig& cfg);
ojson params_json(const SurfaceFamily& f);

struct MeshOutput {
  std::vector<double> p1, p2;
  std::vector<Vector3L> vertices;
  std::vector<CausalCharacter> causal;
  std::vector<std::vector<int>> faces;
};

/// Grid mesh over the window. Rows outside the domain are left out. In each
/// row the grid vertex nearest to a refined zero of EG - F^2 is moved onto it,
/// so the lightlike locus shows up as a band of vertices.
MeshOutput build_mesh(const SurfaceFamily& f, const ParamWindow& w, int threads = 1);

void write_ply(std::ostream& os, const MeshOutput& m);
void write_csv(std::ostream& os, const MeshOutput& m);

ojson classify_json(const SurfaceFamily& f, const ClassReport& r);

/// Output of a subcommand: the text for stdout (may be empty) and the exit code
/// 0 pass, 1 mathematical disagreement, 2 bad input, 3 I/O, 4 precondition.
struct CommandResult {
  int exit_code = 0;
  std::string stdout_text;
  std::string stderr_text;
};

CommandResult cmd_generate(const RunConfig& cfg);
CommandResult cmd_classify(const RunConfig& cfg);
CommandResult cmd_characteristic(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);

/// Runs one of the commands and maps library errors onto exit codes.
CommandResult run_command(const std::string& name, const RunConfig& cfg);

}  // namespace zmc
