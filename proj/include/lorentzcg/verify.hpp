#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lorentzcg::verify {

struct CheckResult {
  std::string name;
  std::string anchor; // which identity the check certifies
  double residual;    // worst measured deviation
  double tolerance;
  bool pass;
};

struct Options {
  std::uint64_t seed = 20250810;
  std::optional<double> tolerance_override; // replaces every per-check tolerance
  int threads = 1;
};

struct Report {
  Options options;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  bool all_pass;
};

/// The full identity battery: algebra closure, Casimir scalars, the
/// half-coupling golden table, block spectra, non-diagonalizable defect
/// detection, the coefficient-ratio recurrence, the Wigner-Eckart round trip,
/// ladder reconstruction and commutators, the tridiagonal eigenspace property,
/// the su(2) layer, and classification/dimension checks.
Report run_acceptance(const Options& options);

} // namespace lorentzcg::verify
