#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qlest/evaluation.hpp"

namespace qlest {

enum class ReportFormat { Csv, Json };

/// Columns: day,lane,estimator,rmse,mean_error,n_obs,avg_p.
void write_report_csv(std::ostream& out, const EvalReport& report);
/// {"metadata": {...}, "cells": [...]} with full double precision.
void write_report_json(std::ostream& out, const EvalReport& report);
EvalReport read_report_json(std::istream& in);

/// Writes to path; throws std::runtime_error when the path is not writable.
void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path);

/// One row per evaluated cycle: day,time,lane,true_queue,probe_count then one
/// column per estimator.
void write_series_csv(std::ostream& out, const Evaluation& evaluation,
                      const std::vector<EstimatorId>& estimators);

/// Fixed-width plain-text table of a report for terminals.
std::string format_report_table(const EvalReport& report);

}  // namespace qlest
