#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpguard/core.hpp"
#include "fpguard/fptree.hpp"
#include "fpguard/simulator.hpp"

// Line-oriented artifact formats. Every file starts with a header line
//
//   %fpguard <kind> <major>.<minor>
//
// and then holds tab-separated records. Fields are backslash-escaped
// (\\ \t \n \r \=). Lines starting with '#' are comments. A reader accepts
// any minor version of its own major and rejects everything else.
namespace fpguard::io {

inline constexpr int kFormatMajor = 1;
inline constexpr int kFormatMinor = 0;

namespace kind {
inline constexpr std::string_view kTransactions = "transactions";
inline constexpr std::string_view kLabels = "labels";
inline constexpr std::string_view kProfile = "profile";
inline constexpr std::string_view kScores = "scores";
inline constexpr std::string_view kAlerts = "alerts";
inline constexpr std::string_view kAlertTrace = "alert-trace";
inline constexpr std::string_view kRoc = "roc";
inline constexpr std::string_view kCostCurve = "cost-curve";
}  // namespace kind

struct FormatHeader {
  std::string kind;
  int major = 0;
  int minor = 0;
};

std::string header_line(std::string_view kind);
std::optional<FormatHeader> parse_header(std::string_view line);
// FormatError naming the expected kind/version and what was found.
void expect_header(std::string_view line, std::string_view kind, std::string_view source);

enum class ParseMode { kStrict, kLenient };

struct ParseReport {
  std::size_t skipped = 0;
  std::vector<std::string> problems;  // "line N: why"
};

// One record: entity, timestamp, amount, then attr=value fields.
// FormatError on malformed lines (duplicate attribute, bad number, ...).
Transaction parse_transaction_line(std::string_view line);
std::string format_transaction(const Transaction& transaction);

// The header line is optional for transaction files so that externally
// produced data can be read directly. Strict mode throws on the first bad
// line; lenient mode skips it and records the problem.
std::vector<Transaction> parse_transactions(std::istream& in, ParseMode mode = ParseMode::kStrict,
                                            ParseReport* report = nullptr);
// Canonical form: header, then one line per transaction with items in
// Item order and amounts in shortest round-trip notation.
void write_transactions(std::ostream& out, std::span<const Transaction> transactions);

std::vector<Label> parse_labels(std::istream& in);
void write_labels(std::ostream& out, std::span<const Label> labels);

struct StoredProfile {
  std::string entity_id;
  Timestamp updated_at = 0;  // newest window transaction at build time
  FpTree tree;
};

void write_profile(std::ostream& out, const StoredProfile& profile);
StoredProfile read_profile(std::istream& in, std::string_view source = "profile");

// Profile directory: one "<entity>.fpprofile" file per entity, with every
// byte outside [A-Za-z0-9._-] of the entity id written as %XX.
std::string profile_file_name(std::string_view entity_id);
void save_profiles(const std::filesystem::path& dir,
                   const std::map<std::string, StoredProfile>& profiles);
std::map<std::string, StoredProfile> load_profiles(const std::filesystem::path& dir);

struct ScoreRow {
  std::size_t index = 0;  // position in the scored transaction file
  std::string entity_id;
  Timestamp timestamp = 0;
  double amount = 0.0;
  double similarity = 0.0;
  double suspicion = 1.0;
  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

void write_scores(std::ostream& out, std::span<const ScoreRow> rows);
std::vector<ScoreRow> read_scores(std::istream& in, std::string_view source = "scores");

struct AlertRow {
  std::string entity_id;
  Timestamp window_end = 0;
  double alert_value = 0.0;
  std::string severity;
  std::size_t record_count = 0;
  friend bool operator==(const AlertRow&, const AlertRow&) = default;
};

void write_alerts(std::ostream& out, std::span<const AlertRow> rows);
std::vector<AlertRow> read_alerts(std::istream& in, std::string_view source = "alerts");

// Alert value after each scored record, for alert-level evaluation.
struct TraceRow {
  std::size_t index = 0;
  std::string entity_id;
  Timestamp timestamp = 0;
  double alert_value = 0.0;
  std::optional<std::string> severity;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

void write_trace(std::ostream& out, std::span<const TraceRow> rows);
std::vector<TraceRow> read_trace(std::istream& in, std::string_view source = "alert trace");

// File helpers raising IoError with the path in the message.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace fpguard::io
