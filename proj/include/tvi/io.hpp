#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tvi/param.hpp"
#include "tvi/rcl.hpp"

namespace tvi {

using Json = nlohmann::json;

/// Malformed input: bad JSON, missing fields, wrong value types, negative
/// dimensions. Structural problems inside well-formed data (a block of the
/// wrong size, say) surface as ShapeError instead.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Matrices and block matrices
// ---------------------------------------------------------------------------

/// {"rows": r, "cols": c, "data": [[[re, im], ...], ...]} with one inner
/// array per row.
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

/// {"window": [lo, hi], "dims_codomain": [...], "dims_domain": [...],
///  "blocks": [{"j": .., "k": .., "data": matrix}, ...]}
/// Only stored blocks are listed; block order is (j, k) lexicographic.
Json block_matrix_to_json(const BlockMatrix& m);
BlockMatrix block_matrix_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Domain objects
// ---------------------------------------------------------------------------

Json tolerance_to_json(const Tolerance& tol);
Tolerance tolerance_from_json(const Json& j);

/// {"window": [lo, hi], "dims_in": [...], "dims_out": [...],
///  "columns": [{"basis": m, "to_output": m, "to_prev": m}, ...]}
Json interpolation_to_json(const InterpolationData& data);
InterpolationData interpolation_from_json(const Json& j);

/// {"top": blockmatrix, "bottom": blockmatrix}
Json pair_to_json(const SchurPair& pair);
SchurPair pair_from_json(const Json& j);

/// {"window": [lo, hi], "dims_source": [...], "dims_target": [...],
///  "dims_anchor": [...], "to_lift": [m...], "evolution": [m...],
///  "relax_old": [m...], "relax_new": [m...]} (per-index arrays, lo..hi)
Json lifting_to_json(const LiftingProblem& prob);
LiftingProblem lifting_from_json(const Json& j);

/// {"window": [lo, hi], "columns": [m...]}
Json lift_sequence_to_json(const LiftSequence& seq);
LiftSequence lift_sequence_from_json(const Json& j);

/// {"state": m, "input": m, "output": m, "feedthrough": blockmatrix}.
/// Parsing re-runs the stability/shape validation, so a parsed system
/// always carries a correct gram tail.
Json state_space_to_json(const StateSpaceSystem& sys);
StateSpaceSystem state_space_from_json(const Json& j, const Tolerance& tol);

/// {"dims_in": [4 ints], "dims_out": [4 ints], "entries": [[m x 4] x 4],
///  "overlap_residual": x}
Json completion_to_json(const CompletionInstance4x4& inst);
CompletionInstance4x4 completion_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

/// Top-level file layout: {"kind": <tag>, "payload": {...}} plus an
/// optional "tolerances" object. Recognized kinds:
///   interpolation, zpair, blockmatrix, rcl, liftsequence, statespace,
///   completion4x4, cayley.
struct ProblemFile {
  std::string kind;
  Json payload;
  std::optional<Tolerance> tolerances;
};

ProblemFile problem_file_from_json(const Json& j);
Json problem_file_to_json(const std::string& kind, Json payload,
                          const std::optional<Tolerance>& tolerances = std::nullopt);

// ---------------------------------------------------------------------------
// Text round-trip
// ---------------------------------------------------------------------------

/// Canonical dump: two-space indent, sorted object keys (nlohmann's
/// default ordering), trailing newline. Identical values produce
/// byte-identical text.
std::string dump_json(const Json& j);

/// Read and parse a file; ParseError on unreadable or invalid input.
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tvi
