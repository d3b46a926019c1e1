#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "snacert/construct.hpp"
#include "snacert/interval.hpp"

// Self-contained certificate documents. Every document embeds the input
// space, its SHA-256 digest, all basis data and witnesses, and the verdict;
// no timestamps, so identical runs dump identical bytes.
namespace snacert::cert {

using nlohmann::json;

inline constexpr std::string_view kToolName = "snacert";
inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
std::string space_digest(const PointedMetricSpace& space);
std::string hybrid_digest(const HybridSpace& space);

json l1_document(const L1IsometryCertificate& cert, json config = json::object());
json linf_document(const LinfIsometryCertificate& cert, json config = json::object());
json complementation_document(const ComplementationCertificate& cert, json config = json::object());
// Throws PreconditionError unless result.success().
json pipeline_document(const PipelineResult& result, json config = json::object());
json hybrid_document(const HybridSpace& space, const PwlFunctional& f, json config = json::object());

struct Verification {
  std::string kind;
  std::string stated;      // verdict recorded in the document
  bool valid = false;      // re-derived verdict
  bool reproduced = false; // re-derived verdict equals the stated one
  std::vector<std::string> passed;
  std::string failing_check;  // first failing check, empty when valid
  std::string detail;

  json to_json() const;
};

// Re-derives every check from the document's own data, never trusting
// recorded norms or flags. Throws InputError on malformed documents.
Verification verify(const json& doc);

}  // namespace snacert::cert
