#pragma once

#include <string>

#include "amm/verifier.hpp"

namespace amm {

std::string outcome_name(Outcome o);
std::string status_name(FindingStatus s);

// Stable serialization: fixed key order, two-space indent, trailing newline.
// Two certificates with equal payloads produce identical bytes.
std::string certificate_to_json(const ProofCertificate& cert);

// Throws std::invalid_argument on malformed or schema-violating input.
ProofCertificate certificate_from_json(const std::string& text);

}  // namespace amm
