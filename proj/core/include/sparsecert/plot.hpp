#pragma once

#include <string>
#include <vector>

#include "sparsecert/ensemble.hpp"

namespace sparsecert {

/// Rate-vs-alpha line charts as a standalone SVG document: one panel per rho
/// multiplier (first-seen order), one series per (method, p) inside each
/// panel. Pure function of its input; identical curves give identical bytes.
std::string render_recovery_svg(const std::vector<RecoveryCurve>& curves);

}  // namespace sparsecert
