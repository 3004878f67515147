#pragma once

// Chat transcript parsing and the anonymized (user, timestamp) message log.
//
// Only two facts about each message survive parsing: who sent it and when.
// Bodies are read to find line boundaries and then dropped.

#include <engage/core.hpp>

#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace engage {

struct MessageEvent {
  UserId user = 0;
  Timestamp timestamp = 0;
  std::int64_t seq = 0;  // file order

  friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
};

/// Chronologically ordered, immutable message log.
class MessageLog {
 public:
  MessageLog() = default;

  /// Validates ordering (seq strictly increasing, timestamps non-decreasing)
  /// and that user IDs are non-negative. Throws Error{ordering|schema}.
  MessageLog(std::string group_name, std::vector<MessageEvent> events);

  const std::string& group_name() const { return group_name_; }
  std::span<const MessageEvent> events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// Number of distinct user IDs.
  std::size_t user_count() const { return user_count_; }
  /// One past the largest user ID (equals user_count() for dense logs).
  UserId id_bound() const { return id_bound_; }

  /// First and last timestamps; both zero for an empty log.
  Timestamp first_time() const { return first_; }
  Timestamp last_time() const { return last_; }

  friend bool operator==(const MessageLog&, const MessageLog&) = default;

 private:
  std::string group_name_;
  std::vector<MessageEvent> events_;
  std::size_t user_count_ = 0;
  UserId id_bound_ = 0;
  Timestamp first_ = 0;
  Timestamp last_ = 0;
};

// ---------------------------------------------------------------------------
// Transcript grammar

/// Header grammars for exported transcripts. Selected explicitly; there is
/// no auto-detection.
///   whatsapp_en_dash:  "D/M/YY, HH:MM - Sender: body"
///   whatsapp_us_dash:  "M/D/YY, H:MM[ AM|PM] - Sender: body"
///   whatsapp_bracket:  "[D/M/YY, HH:MM:SS] Sender: body"
enum class ExportProfile { whatsapp_en_dash, whatsapp_us_dash, whatsapp_bracket };

ExportProfile parse_profile(std::string_view name);
std::string_view to_string(ExportProfile profile);

/// Wall-clock reading from a transcript header, before zone resolution.
struct CivilTime {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
};

struct RawExportLine {
  enum class Kind { message_start, continuation, system };
  Kind kind = Kind::continuation;
  CivilTime time;            // message_start and system only
  std::string_view sender;   // message_start only
  std::string_view body;
};

/// Classifies one transcript line. Throws Error{parse} when the line has a
/// header shape but invalid date/time fields.
RawExportLine classify_line(std::string_view line, ExportProfile profile);

/// Resolves civil times to UTC. Accepts "UTC", fixed offsets ("+03:00",
/// "-0300", "UTC-03:00") and IANA names ("America/Sao_Paulo").
class TimeZone {
 public:
  static TimeZone utc() { return TimeZone{}; }
  static TimeZone parse(std::string_view id);

  Timestamp to_utc(const CivilTime& t) const;
  const std::string& name() const { return name_; }

 private:
  // Memoized local-minute -> UTC conversions for named zones.
  struct ZoneCache {
    std::mutex mutex;
    std::unordered_map<std::int64_t, Timestamp> minutes;
  };

  std::string name_ = "UTC";
  std::int64_t offset_seconds_ = 0;
  bool fixed_ = true;
  std::shared_ptr<ZoneCache> cache_;
};

/// Days since 1970-01-01 for a proleptic Gregorian date; throws Error{parse}
/// on an invalid date.
std::int64_t days_from_civil(int year, int month, int day);

/// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM[:SS][Z]" as UTC.
Timestamp parse_iso_utc(std::string_view text);

struct ParseOptions {
  ExportProfile profile = ExportProfile::whatsapp_en_dash;
  TimeZone tz = TimeZone::utc();
  /// Allowed backward movement between consecutive headers, seconds.
  std::int64_t slack_seconds = 0;
  std::string group_name;
};

/// Parse result. `senders[id]` is the display name of user `id`; it exists
/// only in memory, to feed anonymize(), and is never written out.
struct ParsedExport {
  MessageLog log;
  std::vector<std::string> senders;
};

/// One event per message-start line; IDs assigned by first appearance.
/// Throws Error{parse} (with line number) or Error{ordering}.
ParsedExport parse_export(std::istream& text, const ParseOptions& options);

// ---------------------------------------------------------------------------
// Anonymization

struct MappingEntry {
  std::string hashed_sender;  // lowercase hex HMAC-SHA256(salt, sender)
  UserId user_id = 0;

  friend bool operator==(const MappingEntry&, const MappingEntry&) = default;
};

using SenderMapping = std::vector<MappingEntry>;

struct AnonymizedLog {
  MessageLog log;
  SenderMapping mapping;  // sorted by user_id
};

std::string keyed_hash_hex(std::string_view salt, std::string_view sender);

/// Replaces sender identities with dense IDs. Without a prior mapping, IDs
/// follow first appearance. With one, known senders keep their prior IDs and
/// new senders are appended. Throws Error{mapping_conflict} when the prior
/// mapping is not injective or would leave gaps in this log's ID range.
AnonymizedLog anonymize(const ParsedExport& parsed, std::string_view salt,
                        const SenderMapping* prior = nullptr);

void write_mapping(std::ostream& out, const SenderMapping& mapping);
SenderMapping read_mapping(std::istream& in);

/// Hex helpers for salts. decode_hex throws Error{parameter}.
std::string decode_hex(std::string_view hex);
std::string encode_hex(std::string_view bytes);
std::string random_salt(std::size_t bytes = 16);

// ---------------------------------------------------------------------------
// Canonical log files

enum class LogFormat { csv, jsonl };

LogFormat parse_log_format(std::string_view name);
std::string_view to_string(LogFormat format);
/// Picks the format from a file extension (".csv" or ".jsonl").
LogFormat log_format_for_path(std::string_view path);

using WarningSink = std::function<void(std::string_view)>;

/// Reads a canonical log. Rows out of (timestamp, row) order are re-sorted
/// and reported through `warn`. Throws Error{schema} on a missing column,
/// unparsable timestamp or negative user ID.
MessageLog read_log(std::istream& in, LogFormat format, std::string group_name,
                    const WarningSink& warn = {});
MessageLog load_log(const std::string& path, LogFormat format,
                    const WarningSink& warn = {});

void write_log(std::ostream& out, const MessageLog& log, LogFormat format);

}  // namespace engage
