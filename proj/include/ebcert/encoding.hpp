#pragma once

// JSON encoding of matrices, states and channels. A matrix is an array of
// rows, each row an array of [re, im] pairs. A state is {"dim", "matrix"}; a
// channel is {"kind": "holevo"|"kraus", "dim_in", "dim_out", "pairs"|"kraus"}
// with pairs of the form {"R": matrix, "X": matrix}.

#include "json.hpp"

#include "ebcert/channels.hpp"
#include "ebcert/linalg.hpp"

namespace ebcert {

nlohmann::json encode_matrix(const ComplexMatrix& m);

/// Throws Error("schema") on malformed input.
ComplexMatrix decode_matrix(const nlohmann::json& j, const char* what = "matrix");

nlohmann::json encode_state(const DensityMatrix& rho);
/// Schema errors raise Error("schema"); invariant failures keep the invariant name.
DensityMatrix decode_state(const nlohmann::json& j);

nlohmann::json encode_channel(const Channel& c);
Channel decode_channel(const nlohmann::json& j);

}  // namespace ebcert
