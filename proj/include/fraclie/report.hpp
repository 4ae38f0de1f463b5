#ifndef FRACLIE_REPORT_HPP
#define FRACLIE_REPORT_HPP

#include <string>

#include "json.hpp"

#include "fraclie/grid.hpp"
#include "fraclie/solutions.hpp"

namespace fraclie {

inline constexpr const char* kReportSchema = "fraclie-report/1";

nlohmann::json to_json(const GridSpec& g);
/// Residual report plus its tolerance and pass flag.
nlohmann::json to_json(const ResidualReport& r, double tolerance);
nlohmann::json to_json(const Note& n);

/// Skeleton shared by every command: schema tag, command name, status.
nlohmann::json report_header(const std::string& command);

}  // namespace fraclie

#endif
