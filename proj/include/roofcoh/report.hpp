#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "roofcoh/verify.hpp"

namespace roofcoh {

/// Shortest round-trip formatting; identical doubles always print the same
/// bytes, which is what the bit-identical-CSV guarantee rests on.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// A report row as it appears in CSV output. `finding` marks a negative gap
/// observed by an exploratory (record-only) sweep; such rows are surfaced
/// with verdict "finding" and are never silently dropped.
struct LabeledReport {
  VerificationReport report;
  std::string dims;
  std::string measure;
  bool finding = false;
};

inline std::string csv_header() {
  return "inequality_id,dims,measure,lhs,rhs_total,gap,tol,verdict,seed,input_digest";
}

inline std::string csv_row(const LabeledReport& row) {
  std::string out;
  out += row.report.inequality_id;
  out += ',';
  out += row.dims;
  out += ',';
  out += row.measure;
  out += ',';
  out += format_double(row.report.lhs);
  out += ',';
  out += format_double(row.report.rhs_total());
  out += ',';
  out += format_double(row.report.gap);
  out += ',';
  out += format_double(row.report.tol);
  out += ',';
  out += row.finding ? "finding" : to_string(row.report.verdict);
  out += ',';
  out += std::to_string(row.report.seed);
  out += ',';
  out += row.report.input_digest;
  return out;
}

inline nlohmann::json report_to_json(const LabeledReport& row) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& term : row.report.rhs_terms) {
    terms.push_back({{"label", term.label}, {"value", term.value}});
  }
  return nlohmann::json{{"inequality_id", row.report.inequality_id},
                        {"dims", row.dims},
                        {"measure", row.measure},
                        {"lhs", row.report.lhs},
                        {"rhs_terms", terms},
                        {"rhs_total", row.report.rhs_total()},
                        {"gap", row.report.gap},
                        {"tol", row.report.tol},
                        {"verdict", row.finding ? "finding" : to_string(row.report.verdict)},
                        {"direction_notes", row.report.direction_notes},
                        {"seed", row.report.seed},
                        {"input_digest", row.report.input_digest}};
}

}  // namespace roofcoh
