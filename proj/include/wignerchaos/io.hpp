#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wignerchaos/experiment.hpp"
#include "wignerchaos/kernel.hpp"
#include "wignerchaos/moment.hpp"
#include "wignerchaos/rmsim.hpp"

namespace wigner::io {

using nlohmann::json;

/// Numbers in reports are rounded to 12 significant digits.
double round12(double x);
std::string format12(double x);

/// "1212" when every letter is a single digit, "1,12,3" otherwise.
std::string format_word(const std::vector<int>& word);
/// Inverse of format_word; throws ParseError.
std::vector<int> parse_word(const std::string& text);

// Kernel file:
//   {"order": n, "grid": {"delta": x, "cells": m},
//    "coeffs": [{"idx": [j1..jn], "re": x, "im": y}, ...]}
// NaN/Inf, negative or out-of-range indices are rejected with ParseError or
// the kernel constructor's error.
json kernel_to_json(const StepKernel& f);
StepKernel kernel_from_json(const json& j);
StepKernel read_kernel(const std::filesystem::path& path);

/// Accepts a bare matrix [[...], ...] or {"covariance": [[...], ...]}.
CovarianceMatrix covariance_from_json(const json& j);
json covariance_to_json(const CovarianceMatrix& c);

json pairing_to_json(const Pairing& pi);
Pairing pairing_from_json(const json& j);

json moment_report_to_json(const MomentReport& r, bool with_contributions);
MomentReport moment_report_from_json(const json& j);
std::string moment_report_csv_header();
std::string moment_report_csv_row(const MomentReport& r);

json convergence_report_to_json(const ConvergenceReport& r);
ConvergenceReport convergence_report_from_json(const json& j);
/// Columns k, word, measured, target, gap, engine.
std::string convergence_report_to_csv(const ConvergenceReport& r);
std::vector<MomentRow> convergence_rows_from_csv(const std::string& text);

json empirical_moments_to_json(const std::vector<EmpiricalMoment>& rows, const SimConfig& cfg);
std::vector<EmpiricalMoment> empirical_moments_from_json(const json& j);
std::string empirical_moments_to_csv(const std::vector<EmpiricalMoment>& rows);

/// JSON schemas of the kernel file and of every report format.
json schemas();

json parse_json_text(const std::string& text);
std::string read_text(const std::filesystem::path& path);
/// Writes via a sibling temporary file and rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace wigner::io
