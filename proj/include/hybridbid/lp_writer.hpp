#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hybridbid/model_ir.hpp"

namespace hybridbid {

/// LP-safe identifiers for every variable, in column order.  Characters
/// outside [A-Za-z0-9_] are replaced with '_' and collisions resolved with
/// an index suffix, so the mapping is deterministic.
std::vector<std::string> lp_variable_names(const ModelIR& model);

/// Writes the model as a CPLEX-style LP file (12 significant digits).
void write_lp(const ModelIR& model, std::ostream& out);

std::string write_lp_string(const ModelIR& model);

}  // namespace hybridbid
