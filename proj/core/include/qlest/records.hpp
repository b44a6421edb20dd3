#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlest {

enum class Lane { Left, Center, Right };

std::string_view to_string(Lane lane);
/// Accepts L, C or R. Throws std::invalid_argument otherwise.
Lane parse_lane(std::string_view text);

/// One observed signal cycle on one lane.
struct CycleRecord {
  std::string day;
  std::int64_t time_of_day = 0;  // seconds since midnight
  Lane lane = Lane::Center;
  std::int64_t true_queue = 0;
  std::int64_t probe_count = 0;
  double cycle_seconds = 0.0;

  friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

/// hh:mm:ss <-> seconds since midnight.
std::int64_t parse_time_of_day(std::string_view text);
std::string format_time_of_day(std::int64_t seconds);

/// Raised for malformed or inconsistent input; line() is 1-based, 0 when
/// the problem is not tied to one line.
class RecordError : public std::runtime_error {
 public:
  RecordError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct IngestOptions {
  /// Used for a (day, lane) group holding a single record, where no
  /// timestamp delta exists. Without it such a group is an error.
  std::optional<double> default_cycle_seconds;
};

struct IngestResult {
  std::vector<CycleRecord> records;
  std::vector<std::string> warnings;
};

/// Reads `day,time,lane,true_queue,probe_count` CSV (header required).
/// Cycle length is the gap to the next record of the same day and lane; the
/// last record of a group reuses the gap before it.
IngestResult ingest_csv(std::istream& in, const IngestOptions& options = {});
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options = {});

/// Writes records in the same schema ingest_csv reads.
void write_records_csv(std::ostream& out, const std::vector<CycleRecord>& records);

}  // namespace qlest
