#pragma once

#include <string>

#include <json.hpp>

#include "lorentzcg/coupling.hpp"
#include "lorentzcg/repr.hpp"
#include "lorentzcg/sparse.hpp"

namespace lorentzcg {

// Wire conventions: half-integers serialize as doubled integers under keys
// suffixed _x2; complex scalars as two-element [re, im] arrays.

nlohmann::json complex_json(Complex z);

nlohmann::json basis_json(const TruncatedModule& module);

/// {"basis": ..., "entries": [[row, col, [re, im]], ...]} for square
/// operators over one module basis.
nlohmann::json sparse_json(const SparseOperator& op, const TruncatedModule& basis);

/// Rectangular variant with separate source/target bases.
nlohmann::json sparse_json(const SparseOperator& op, const TruncatedModule& target,
                           const TruncatedModule& source);

nlohmann::json classification_json(const IrrepLabel& label, const Classification& c);

nlohmann::json cg_table_json(const CGTable& table);

/// One row per (J, Lambda, P, j) with coefficient re/im columns.  Lossy: no
/// nested structure, no inverse table.
std::string cg_table_csv(const CGTable& table);

} // namespace lorentzcg
