#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "amiedot/model.hpp"

namespace amiedot {

using Json = nlohmann::json;

// Canonical flat JSON encoding. Optional fields are omitted when absent.
// Decoders throw Error(validation) naming the offending field; they reject
// unknown keys, wrong types and unknown enumeration labels.

Json to_json(const UserRecord& r);
Json to_json(const DocumentRecord& r);
Json to_json(const AnnotationRecord& r);
Json to_json(const ConsultationEvent& e);

UserRecord user_from_json(const Json& j);
DocumentRecord document_from_json(const Json& j);
AnnotationRecord annotation_from_json(const Json& j);
ConsultationEvent event_from_json(const Json& j);

using LogRecord = std::variant<UserRecord, DocumentRecord, ConsultationEvent>;

/// {"kind": "user"|"document"|"event", "body": {...}}
Json to_log_json(const LogRecord& record);
LogRecord log_record_from_json(const Json& j);

/// One JSON-Lines line without the trailing newline.
std::string to_log_line(const LogRecord& record);
LogRecord parse_log_line(std::string_view line);

}  // namespace amiedot
