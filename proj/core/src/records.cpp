#include "qlest/records.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

namespace qlest {

namespace {

constexpr std::string_view kHeader = "day,time,lane,true_queue,probe_count";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::int64_t parse_count(std::string_view text, const char* field, std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw RecordError(std::string(field) + " must be a nonnegative integer, got '" +
                          std::string(text) + "'",
                      line);
  }
  return value;
}

}  // namespace

std::string_view to_string(Lane lane) {
  switch (lane) {
    case Lane::Left: return "L";
    case Lane::Center: return "C";
    case Lane::Right: return "R";
  }
  return "?";
}

Lane parse_lane(std::string_view text) {
  if (text == "L") return Lane::Left;
  if (text == "C") return Lane::Center;
  if (text == "R") return Lane::Right;
  throw std::invalid_argument("lane must be L, C or R, got '" + std::string(text) + "'");
}

std::int64_t parse_time_of_day(std::string_view text) {
  int h = 0, m = 0, s = 0;
  const bool shaped = text.size() == 8 && text[2] == ':' && text[5] == ':';
  auto two = [&](std::size_t at, int& out) {
    const auto [ptr, ec] = std::from_chars(text.data() + at, text.data() + at + 2, out);
    return ec == std::errc() && ptr == text.data() + at + 2;
  };
  if (!shaped || !two(0, h) || !two(3, m) || !two(6, s) || h > 23 || m > 59 || s > 59) {
    throw std::invalid_argument("time must be hh:mm:ss, got '" + std::string(text) + "'");
  }
  return h * 3600 + m * 60 + s;
}

std::string format_time_of_day(std::int64_t seconds) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", static_cast<int>(seconds / 3600),
                static_cast<int>(seconds / 60 % 60), static_cast<int>(seconds % 60));
  return buf;
}

IngestResult ingest_csv(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::vector<std::size_t> line_of;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw RecordError("expected header '" + std::string(kHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != 5) {
      throw RecordError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
    }
    CycleRecord rec;
    if (fields[0].empty()) throw RecordError("day is empty", line_no);
    rec.day = std::string(fields[0]);
    try {
      rec.time_of_day = parse_time_of_day(fields[1]);
      rec.lane = parse_lane(fields[2]);
    } catch (const std::invalid_argument& e) {
      throw RecordError(e.what(), line_no);
    }
    rec.true_queue = parse_count(fields[3], "true_queue", line_no);
    rec.probe_count = parse_count(fields[4], "probe_count", line_no);
    if (rec.probe_count > rec.true_queue) {
      throw RecordError("probe_count exceeds true_queue", line_no);
    }
    result.records.push_back(std::move(rec));
    line_of.push_back(line_no);
  }

  if (result.records.empty()) {
    result.warnings.emplace_back(header_seen ? "input has a header but no records"
                                             : "input is empty");
    return result;
  }

  std::map<std::pair<std::string, Lane>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    groups[{result.records[i].day, result.records[i].lane}].push_back(i);
  }
  for (const auto& [key, members] : groups) {
    if (members.size() == 1) {
      if (!options.default_cycle_seconds) {
        throw RecordError("cannot derive a cycle length for day " + key.first + " lane " +
                              std::string(to_string(key.second)) + " from a single record",
                          line_of[members.front()]);
      }
      result.records[members.front()].cycle_seconds = *options.default_cycle_seconds;
      result.warnings.push_back("single record for day " + key.first + " lane " +
                                std::string(to_string(key.second)) + "; using default cycle length");
      continue;
    }
    for (std::size_t k = 0; k + 1 < members.size(); ++k) {
      auto& rec = result.records[members[k]];
      const auto gap = result.records[members[k + 1]].time_of_day - rec.time_of_day;
      if (gap <= 0) {
        throw RecordError("timestamps must increase within a day and lane",
                          line_of[members[k + 1]]);
      }
      rec.cycle_seconds = static_cast<double>(gap);
    }
    result.records[members.back()].cycle_seconds =
        result.records[members[members.size() - 2]].cycle_seconds;
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw RecordError("cannot open " + path.string(), 0);
  return ingest_csv(in, options);
}

void write_records_csv(std::ostream& out, const std::vector<CycleRecord>& records) {
  out << kHeader << '\n';
  for (const auto& r : records) {
    out << r.day << ',' << format_time_of_day(r.time_of_day) << ',' << to_string(r.lane) << ','
        << r.true_queue << ',' << r.probe_count << '\n';
  }
}

}  // namespace qlest
