#pragma once

namespace solwalk {

inline constexpr const char* kToolName = "solenoid-walk";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "report_v1";

}  // namespace solwalk
