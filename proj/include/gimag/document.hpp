#pragma once

// JSON descriptions of states, channels and superchannels:
//
//   {"kind": "state",        "modes": n, "displacement": [...], "covariance": [[...], ...]}
//   {"kind": "channel",      "modes": n, "T": [[...]], "N": [[...]], "d": [...]}
//   {"kind": "superchannel", "modes": n, "A": [[...]], "O": [[...]], "Y": [[...]], "dbar": [...]}
//
// Matrices are row-major nested arrays of size 2n x 2n, vectors length 2n.

#include <string>
#include <variant>

#include "gimag/errors.hpp"
#include "gimag/gaussian.hpp"
#include "json.hpp"

namespace gimag {

using Json = nlohmann::ordered_json;

class DocumentError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

using ObjectDocument = std::variant<GaussianState, GaussianChannel, GaussianSuperchannel>;

// Throws DocumentError on malformed JSON, unknown kind, missing or unknown
// keys, ragged arrays, non-numeric entries or a shape that does not match
// "modes".
ObjectDocument parse_document(const std::string& text);
ObjectDocument parse_document(const Json& j);

Json to_json(const ObjectDocument& doc);
std::string serialize_document(const ObjectDocument& doc);

std::string document_kind(const ObjectDocument& doc);

Json matrix_to_json(const RealMatrix& m);
Json vector_to_json(const RealVector& v);

}  // namespace gimag
