#pragma once

namespace sparsecert::tolerance {

// Relative agreement knob shared by oracle/certificate cross-checks.
inline constexpr double kRelative = 1e-9;

// Slack allowed when re-verifying the three dual certificate conditions.
inline constexpr double kCondition = 1e-8;

// Entrywise asymmetry accepted by the symmetric eigen-solver (scaled by 1 + max|a_ij|).
inline constexpr double kSymmetry = 1e-12;

// A correlation score is treated as zero below this multiple of ||y|| * max_j ||X_j||.
inline constexpr double kZeroScore = 1e-14;

}  // namespace sparsecert::tolerance
