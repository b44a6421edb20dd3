#include "qlest/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qlest {

namespace {

using Json = nlohmann::ordered_json;

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "day,lane,estimator,rmse,mean_error,n_obs,avg_p\n";
  for (const auto& c : report.cells) {
    out << c.day << ',' << to_string(c.lane) << ',' << to_string(c.estimator) << ','
        << fixed(c.rmse) << ',' << fixed(c.mean_error) << ',' << c.n_obs << ',' << fixed(c.avg_p)
        << '\n';
  }
}

void write_report_json(std::ostream& out, const EvalReport& report) {
  Json doc;
  doc["metadata"] = Json::object();
  for (const auto& [k, v] : report.metadata) doc["metadata"][k] = v;
  doc["cells"] = Json::array();
  for (const auto& c : report.cells) {
    doc["cells"].push_back({{"day", c.day},
                            {"lane", to_string(c.lane)},
                            {"estimator", to_string(c.estimator)},
                            {"rmse", c.rmse},
                            {"mean_error", c.mean_error},
                            {"n_obs", c.n_obs},
                            {"avg_p", c.avg_p}});
  }
  out << doc.dump(2) << '\n';
}

EvalReport read_report_json(std::istream& in) {
  EvalReport report;
  try {
    const Json doc = Json::parse(in);
    for (const auto& [k, v] : doc.at("metadata").items()) {
      report.metadata[k] = v.get<std::string>();
    }
    for (const auto& c : doc.at("cells")) {
      EvalCell cell;
      cell.day = c.at("day").get<std::string>();
      cell.lane = parse_lane(c.at("lane").get<std::string>());
      cell.estimator = parse_estimator(c.at("estimator").get<std::string>());
      cell.rmse = c.at("rmse").get<double>();
      cell.mean_error = c.at("mean_error").get<double>();
      cell.n_obs = c.at("n_obs").get<std::int64_t>();
      cell.avg_p = c.at("avg_p").get<double>();
      report.cells.push_back(std::move(cell));
    }
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed report JSON: ") + e.what());
  }
  return report;
}

void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path.string());
  if (format == ReportFormat::Json) {
    write_report_json(out, report);
  } else {
    write_report_csv(out, report);
  }
  if (!out) throw std::runtime_error("failed writing report to " + path.string());
}

void write_series_csv(std::ostream& out, const Evaluation& evaluation,
                      const std::vector<EstimatorId>& estimators) {
  out << "day,time,lane,true_queue,probe_count";
  for (const auto id : estimators) out << ',' << to_string(id);
  out << '\n';
  for (const auto& row : evaluation.series) {
    const CycleRecord& r = *row.record;
    out << r.day << ',' << format_time_of_day(r.time_of_day) << ',' << to_string(r.lane) << ','
        << r.true_queue << ',' << r.probe_count;
    for (const double v : row.mean_estimates) out << ',' << fixed(v, 4);
    out << '\n';
  }
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "day" << std::setw(6) << "lane" << std::setw(11)
     << "estimator" << std::right << std::setw(10) << "rmse" << std::setw(12) << "mean_err"
     << std::setw(8) << "n_obs" << std::setw(8) << "avg_p" << '\n';
  for (const auto& c : report.cells) {
    os << std::left << std::setw(12) << c.day << std::setw(6) << to_string(c.lane)
       << std::setw(11) << to_string(c.estimator) << std::right << std::setw(10) << fixed(c.rmse, 3)
       << std::setw(12) << fixed(c.mean_error, 3) << std::setw(8) << c.n_obs << std::setw(8)
       << fixed(c.avg_p, 3) << '\n';
  }
  return os.str();
}

}  // namespace qlest
