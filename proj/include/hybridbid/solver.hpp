#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hybridbid/model_ir.hpp"

namespace hybridbid {

/// Pluggable MILP backend boundary.  Implementations must be safe to call
/// from multiple threads on distinct models.
class SolverBackend {
  public:
    virtual ~SolverBackend() = default;
    virtual std::string name() const = 0;
    virtual SolveResult solve(const ModelIR& model, const SolveOptions& options) const = 0;
};

/// Wraps a HiGHS-compatible solver executable through its file interface:
/// LP model file in, options file + solution file + log out.  With no
/// explicit command the executable is resolved from $HYBRIDBID_HIGHS, a
/// `highs` binary on PATH, or the bundled tools/milp-solve.py shim.
class HighsProcessBackend : public SolverBackend {
  public:
    explicit HighsProcessBackend(std::vector<std::string> command = {});
    std::string name() const override { return "highs"; }
    SolveResult solve(const ModelIR& model, const SolveOptions& options) const override;

    const std::vector<std::string>& command() const { return command_; }

  private:
    std::vector<std::string> command_;
};

/// Generic fallback: writes the LP file and invokes an arbitrary command
/// with `{lp}` / `{sol}` placeholders.  The executable must write a plain
/// solution listing (`status ...` / `objective ...` / `var <name> <value>`).
class LpExecBackend : public SolverBackend {
  public:
    explicit LpExecBackend(std::vector<std::string> command_template = {});
    std::string name() const override { return "lp-exec"; }
    SolveResult solve(const ModelIR& model, const SolveOptions& options) const override;

  private:
    std::vector<std::string> command_template_;
};

/// Backend factory.  Accepted specs: "highs", "highs:<exe>",
/// "lp-exec:<command with {lp} {sol}>".
std::unique_ptr<SolverBackend> make_backend(const std::string& spec);

/// Default backend (HiGHS wrapper with automatic executable resolution).
std::unique_ptr<SolverBackend> make_default_backend();

/// Path of the bundled solver shim, if it can be located.
std::string locate_bundled_shim();

}  // namespace hybridbid
