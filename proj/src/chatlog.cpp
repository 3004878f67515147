#include <engage/chatlog.hpp>
#include <engage/io.hpp>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/hmac.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <istream>
#include <map>
#include <mutex>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace engage {

// ---------------------------------------------------------------------------
// MessageLog

MessageLog::MessageLog(std::string group_name, std::vector<MessageEvent> events)
    : group_name_(std::move(group_name)), events_(std::move(events)) {
  std::unordered_set<UserId> users;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    if (e.user < 0) {
      throw Error(ErrorKind::schema, fmt::format("negative user id {} at event {}", e.user, i));
    }
    if (i > 0) {
      const auto& prev = events_[i - 1];
      if (e.seq <= prev.seq) {
        throw Error(ErrorKind::ordering, fmt::format("seq not increasing at event {}", i));
      }
      if (e.timestamp < prev.timestamp) {
        throw Error(ErrorKind::ordering, fmt::format("timestamp regresses at event {}", i));
      }
    }
    users.insert(e.user);
    id_bound_ = std::max(id_bound_, e.user + 1);
  }
  user_count_ = users.size();
  if (!events_.empty()) {
    first_ = events_.front().timestamp;
    last_ = events_.back().timestamp;
  }
}

// ---------------------------------------------------------------------------
// Profiles and header classification

ExportProfile parse_profile(std::string_view name) {
  if (name == "whatsapp-en-dash") return ExportProfile::whatsapp_en_dash;
  if (name == "whatsapp-us-dash") return ExportProfile::whatsapp_us_dash;
  if (name == "whatsapp-bracket") return ExportProfile::whatsapp_bracket;
  throw Error(ErrorKind::parameter, fmt::format("unknown export profile '{}'", name));
}

std::string_view to_string(ExportProfile profile) {
  switch (profile) {
    case ExportProfile::whatsapp_en_dash: return "whatsapp-en-dash";
    case ExportProfile::whatsapp_us_dash: return "whatsapp-us-dash";
    case ExportProfile::whatsapp_bracket: return "whatsapp-bracket";
  }
  return "unknown";
}

namespace {

// Cursor over a header candidate. Every matcher returns false without
// consuming on mismatch.
struct Cursor {
  std::string_view s;

  bool literal(std::string_view lit) {
    if (s.substr(0, lit.size()) != lit) return false;
    s.remove_prefix(lit.size());
    return true;
  }

  bool number(int min_digits, int max_digits, int& out) {
    int n = 0;
    int value = 0;
    while (n < max_digits && n < static_cast<int>(s.size()) && s[n] >= '0' && s[n] <= '9') {
      value = value * 10 + (s[n] - '0');
      ++n;
    }
    if (n < min_digits) return false;
    s.remove_prefix(n);
    out = value;
    return true;
  }
};

constexpr std::string_view kEnDash = "\xE2\x80\x93";
constexpr std::string_view kNarrowNbsp = "\xE2\x80\xAF";

std::string_view strip_marks(std::string_view line) {
  // UTF-8 BOM and left-to-right marks prefix some exported lines.
  constexpr std::string_view kBom = "\xEF\xBB\xBF";
  constexpr std::string_view kLrm = "\xE2\x80\x8E";
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (auto mark : {kBom, kLrm}) {
      if (line.substr(0, mark.size()) == mark) {
        line.remove_prefix(mark.size());
        stripped = true;
      }
    }
  }
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

bool read_date(Cursor& c, bool month_first, CivilTime& t) {
  int a = 0, b = 0, y = 0;
  Cursor probe = c;
  if (!probe.number(1, 2, a) || !probe.literal("/") || !probe.number(1, 2, b) ||
      !probe.literal("/")) {
    return false;
  }
  const auto before = probe.s.size();
  if (!probe.number(2, 4, y)) return false;
  const auto digits = before - probe.s.size();
  if (digits == 3) return false;
  t.year = digits == 2 ? 2000 + y : y;
  t.day = month_first ? b : a;
  t.month = month_first ? a : b;
  c = probe;
  return true;
}

bool read_clock(Cursor& c, bool with_seconds, bool allow_ampm, CivilTime& t) {
  Cursor probe = c;
  if (!probe.number(1, 2, t.hour) || !probe.literal(":") || !probe.number(2, 2, t.minute)) {
    return false;
  }
  t.second = 0;
  if (with_seconds) {
    if (!probe.literal(":") || !probe.number(2, 2, t.second)) return false;
  }
  if (allow_ampm) {
    Cursor ap = probe;
    if (ap.literal(" ") || ap.literal(kNarrowNbsp)) {
      const bool am = ap.literal("AM") || ap.literal("am");
      const bool pm = !am && (ap.literal("PM") || ap.literal("pm"));
      if (am || pm) {
        if (t.hour < 1 || t.hour > 12) {
          t.hour = 99;  // forces the range check below to fail
        } else {
          t.hour = (t.hour % 12) + (pm ? 12 : 0);
        }
        probe = ap;
      }
    }
  }
  c = probe;
  return true;
}

void check_fields(const CivilTime& t) {
  if (t.hour > 23 || t.minute > 59 || t.second > 59) {
    throw Error(ErrorKind::parse, fmt::format("invalid time {:02}:{:02}:{:02}", t.hour,
                                              t.minute, t.second));
  }
  (void)days_from_civil(t.year, t.month, t.day);
}

RawExportLine split_sender(std::string_view rest, const CivilTime& time) {
  RawExportLine line;
  line.time = time;
  const auto colon = rest.find(": ");
  if (colon == std::string_view::npos || colon == 0) {
    line.kind = RawExportLine::Kind::system;
    line.body = rest;
    return line;
  }
  line.kind = RawExportLine::Kind::message_start;
  line.sender = rest.substr(0, colon);
  line.body = rest.substr(colon + 2);
  return line;
}

}  // namespace

RawExportLine classify_line(std::string_view raw, ExportProfile profile) {
  const std::string_view text = strip_marks(raw);
  RawExportLine continuation;
  continuation.kind = RawExportLine::Kind::continuation;
  continuation.body = text;

  Cursor c{text};
  CivilTime t;
  if (profile == ExportProfile::whatsapp_bracket) {
    if (!c.literal("[") || !read_date(c, false, t) || !c.literal(", ") ||
        !read_clock(c, true, false, t) || !c.literal("] ")) {
      return continuation;
    }
  } else {
    const bool us = profile == ExportProfile::whatsapp_us_dash;
    if (!read_date(c, us, t) || !c.literal(", ") || !read_clock(c, false, us, t)) {
      return continuation;
    }
    if (!c.literal(" - ") && !(c.literal(" ") && c.literal(kEnDash) && c.literal(" "))) {
      return continuation;
    }
  }
  check_fields(t);
  return split_sender(c.s, t);
}

// ---------------------------------------------------------------------------
// Time

std::int64_t days_from_civil(int year, int month, int day) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (month < 1 || day < 1 || !ymd.ok()) {
    throw Error(ErrorKind::parse, fmt::format("invalid date {:04}-{:02}-{:02}", year, month, day));
  }
  return sys_days{ymd}.time_since_epoch().count();
}

namespace {

bool parse_offset(std::string_view s, std::int64_t& seconds) {
  if (s.empty() || (s[0] != '+' && s[0] != '-')) return false;
  const int sign = s[0] == '-' ? -1 : 1;
  Cursor c{s.substr(1)};
  int hours = 0, minutes = 0;
  if (!c.number(1, 2, hours)) return false;
  if (!c.s.empty()) {
    c.literal(":");
    if (!c.number(2, 2, minutes) || !c.s.empty()) return false;
  }
  if (hours > 14 || minutes > 59) return false;
  seconds = sign * (hours * 3600 + minutes * 60);
  return true;
}

std::filesystem::path zoneinfo_dir() {
  if (const char* dir = std::getenv("TZDIR")) return dir;
  return "/usr/share/zoneinfo";
}

std::mutex& tz_env_mutex() {
  static std::mutex m;
  return m;
}

// Converts a civil time in an IANA zone through the C library. The TZ
// variable is swapped only while the lock is held.
Timestamp mktime_in_zone(const std::string& zone, const CivilTime& t) {
  std::lock_guard lock(tz_env_mutex());
  const char* old = std::getenv("TZ");
  const std::optional<std::string> saved = old ? std::optional<std::string>(old) : std::nullopt;
  setenv("TZ", zone.c_str(), 1);
  tzset();
  std::tm tm{};
  tm.tm_year = t.year - 1900;
  tm.tm_mon = t.month - 1;
  tm.tm_mday = t.day;
  tm.tm_hour = t.hour;
  tm.tm_min = t.minute;
  tm.tm_sec = t.second;
  tm.tm_isdst = -1;
  const std::time_t result = std::mktime(&tm);
  if (saved) {
    setenv("TZ", saved->c_str(), 1);
  } else {
    unsetenv("TZ");
  }
  tzset();
  return static_cast<Timestamp>(result);
}

}  // namespace

TimeZone TimeZone::parse(std::string_view id) {
  TimeZone zone;
  zone.name_ = std::string(id);
  if (id.empty() || id == "UTC" || id == "Z" || id == "GMT" || id == "Etc/UTC") {
    zone.name_ = "UTC";
    return zone;
  }
  std::string_view off = id;
  if (off.substr(0, 3) == "UTC" || off.substr(0, 3) == "GMT") off.remove_prefix(3);
  if (parse_offset(off, zone.offset_seconds_)) return zone;

  const auto file = zoneinfo_dir() / std::string(id);
  std::error_code ec;
  if (id.find("..") != std::string_view::npos || !std::filesystem::is_regular_file(file, ec)) {
    throw Error(ErrorKind::parameter, fmt::format("unknown time zone '{}'", id));
  }
  zone.fixed_ = false;
  zone.cache_ = std::make_shared<ZoneCache>();
  return zone;
}

Timestamp TimeZone::to_utc(const CivilTime& t) const {
  if (fixed_) {
    return days_from_civil(t.year, t.month, t.day) * 86400 + t.hour * 3600 + t.minute * 60 +
           t.second - offset_seconds_;
  }
  const std::int64_t key =
      days_from_civil(t.year, t.month, t.day) * 1440 + t.hour * 60 + t.minute;
  std::lock_guard lock(cache_->mutex);
  auto [it, inserted] = cache_->minutes.try_emplace(key, 0);
  if (inserted) {
    CivilTime minute = t;
    minute.second = 0;
    it->second = mktime_in_zone(name_, minute);
  }
  return it->second + t.second;
}

Timestamp parse_iso_utc(std::string_view text) {
  text = io::trim(text);
  std::int64_t epoch = 0;
  if (io::parse_int(text, epoch)) return epoch;

  Cursor c{text};
  CivilTime t;
  if (!c.number(4, 4, t.year) || !c.literal("-") || !c.number(2, 2, t.month) ||
      !c.literal("-") || !c.number(2, 2, t.day)) {
    throw Error(ErrorKind::parameter, fmt::format("invalid ISO date '{}'", text));
  }
  if (c.literal("T") || c.literal(" ")) {
    if (!c.number(2, 2, t.hour) || !c.literal(":") || !c.number(2, 2, t.minute)) {
      throw Error(ErrorKind::parameter, fmt::format("invalid ISO time in '{}'", text));
    }
    if (c.literal(":") && !c.number(2, 2, t.second)) {
      throw Error(ErrorKind::parameter, fmt::format("invalid ISO seconds in '{}'", text));
    }
    c.literal("Z");
  }
  if (!c.s.empty()) throw Error(ErrorKind::parameter, fmt::format("trailing text in '{}'", text));
  try {
    check_fields(t);
  } catch (const Error& e) {
    throw Error(ErrorKind::parameter, e.what());
  }
  return TimeZone::utc().to_utc(t);
}

// ---------------------------------------------------------------------------
// parse_export

ParsedExport parse_export(std::istream& text, const ParseOptions& options) {
  std::vector<MessageEvent> events;
  std::vector<std::string> senders;
  std::unordered_map<std::string, UserId> ids;

  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::optional<Timestamp> previous;

  while (std::getline(text, line)) {
    ++line_no;
    RawExportLine raw;
    try {
      raw = classify_line(line, options.profile);
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, fmt::format("line {}: {}", line_no, e.what()), line_no);
    }
    if (raw.kind == RawExportLine::Kind::continuation) {
      if (!seen_header && !io::trim(raw.body).empty()) {
        throw Error(ErrorKind::parse,
                    fmt::format("line {}: text before the first header line", line_no), line_no);
      }
      continue;
    }
    seen_header = true;
    if (raw.kind == RawExportLine::Kind::system) continue;

    const Timestamp ts = options.tz.to_utc(raw.time);
    if (previous && ts + options.slack_seconds < *previous) {
      throw Error(ErrorKind::ordering,
                  fmt::format("line {}: timestamp moves back {} s", line_no, *previous - ts),
                  line_no);
    }
    // Within the slack, clamp so the log stays non-decreasing.
    const Timestamp kept = previous ? std::max(ts, *previous) : ts;
    previous = kept;

    std::string sender(raw.sender);
    auto [it, inserted] = ids.try_emplace(sender, static_cast<UserId>(senders.size()));
    if (inserted) senders.push_back(std::move(sender));
    events.push_back({it->second, kept, static_cast<std::int64_t>(events.size())});
  }
  return {MessageLog(options.group_name, std::move(events)), std::move(senders)};
}

// ---------------------------------------------------------------------------
// Anonymization

std::string encode_hex(std::string_view bytes) {
  std::string hex;
  hex.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) hex += fmt::format("{:02x}", b);
  return hex;
}

std::string decode_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorKind::parameter, "hex string has odd length");
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw Error(ErrorKind::parameter, fmt::format("invalid hex digit '{}'", ch));
  };
  std::string bytes;
  bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    bytes.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return bytes;
}

std::string random_salt(std::size_t bytes) {
  std::random_device rd;
  std::string salt(bytes, '\0');
  for (auto& b : salt) b = static_cast<char>(rd() & 0xFF);
  return salt;
}

std::string keyed_hash_hex(std::string_view salt, std::string_view sender) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  const auto* ok = HMAC(EVP_sha256(), salt.data(), static_cast<int>(salt.size()),
                        reinterpret_cast<const unsigned char*>(sender.data()), sender.size(),
                        digest, &length);
  if (ok == nullptr) throw Error(ErrorKind::io, "HMAC computation failed");
  return encode_hex(std::string_view(reinterpret_cast<const char*>(digest), length));
}

AnonymizedLog anonymize(const ParsedExport& parsed, std::string_view salt,
                        const SenderMapping* prior) {
  std::vector<std::string> hashes;
  hashes.reserve(parsed.senders.size());
  for (const auto& s : parsed.senders) hashes.push_back(keyed_hash_hex(salt, s));

  std::unordered_map<std::string, UserId> known;
  UserId next = 0;
  if (prior != nullptr) {
    std::unordered_set<UserId> seen_ids;
    for (const auto& entry : *prior) {
      if (entry.user_id < 0 || !known.emplace(entry.hashed_sender, entry.user_id).second ||
          !seen_ids.insert(entry.user_id).second) {
        throw Error(ErrorKind::mapping_conflict,
                    fmt::format("prior mapping is not injective at {}", entry.hashed_sender));
      }
      next = std::max(next, entry.user_id + 1);
    }
  }

  // Old parse ID -> final ID.
  std::vector<UserId> relabel(hashes.size());
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    auto it = known.find(hashes[i]);
    relabel[i] = it != known.end() ? it->second : next++;
  }
  if (prior != nullptr) {
    std::vector<bool> used(static_cast<std::size_t>(next), false);
    for (auto id : relabel) used[static_cast<std::size_t>(id)] = true;
    if (!std::all_of(used.begin(), used.end(), [](bool b) { return b; })) {
      throw Error(ErrorKind::mapping_conflict,
                  "prior mapping assigns IDs to senders absent from this log");
    }
  }

  std::vector<MessageEvent> events(parsed.log.events().begin(), parsed.log.events().end());
  for (auto& e : events) e.user = relabel[static_cast<std::size_t>(e.user)];

  SenderMapping mapping;
  mapping.reserve(hashes.size());
  for (std::size_t i = 0; i < hashes.size(); ++i) mapping.push_back({hashes[i], relabel[i]});
  std::sort(mapping.begin(), mapping.end(),
            [](const auto& a, const auto& b) { return a.user_id < b.user_id; });

  return {MessageLog(parsed.log.group_name(), std::move(events)), std::move(mapping)};
}

void write_mapping(std::ostream& out, const SenderMapping& mapping) {
  out << "hashed_sender,user_id\n";
  for (const auto& e : mapping) out << e.hashed_sender << ',' << e.user_id << '\n';
}

SenderMapping read_mapping(std::istream& in) {
  SenderMapping mapping;
  std::string line;
  if (!std::getline(in, line) || io::trim(line) != "hashed_sender,user_id") {
    throw Error(ErrorKind::schema, "mapping file must start with 'hashed_sender,user_id'", 1);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto fields = io::split_csv(line);
    std::int64_t id = 0;
    if (fields.size() != 2 || !io::parse_int(fields[1], id) || id < 0) {
      throw Error(ErrorKind::schema, fmt::format("bad mapping row at line {}", line_no), line_no);
    }
    mapping.push_back({std::string(io::trim(fields[0])), static_cast<UserId>(id)});
  }
  return mapping;
}

// ---------------------------------------------------------------------------
// Canonical log files

LogFormat parse_log_format(std::string_view name) {
  if (name == "csv") return LogFormat::csv;
  if (name == "jsonl") return LogFormat::jsonl;
  throw Error(ErrorKind::parameter, fmt::format("unknown log format '{}'", name));
}

std::string_view to_string(LogFormat format) {
  return format == LogFormat::csv ? "csv" : "jsonl";
}

LogFormat log_format_for_path(std::string_view path) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") return LogFormat::csv;
  if (ext == ".jsonl") return LogFormat::jsonl;
  throw Error(ErrorKind::parameter, fmt::format("cannot infer log format from '{}'", path));
}

namespace {

struct Row {
  std::int64_t user;
  std::int64_t timestamp;
};

Row checked_row(std::int64_t user, std::int64_t ts, std::size_t line_no) {
  if (user < 0) {
    throw Error(ErrorKind::schema, fmt::format("line {}: negative user id {}", line_no, user),
                line_no);
  }
  if (user > std::numeric_limits<UserId>::max()) {
    throw Error(ErrorKind::schema, fmt::format("line {}: user id out of range", line_no), line_no);
  }
  return {user, ts};
}

std::vector<Row> read_csv_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::schema, "empty log file", 1);
  const auto header = io::split_csv(line);
  int user_col = -1, time_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = io::trim(header[i]);
    if (name == "user_id") user_col = static_cast<int>(i);
    if (name == "timestamp") time_col = static_cast<int>(i);
  }
  if (user_col < 0) throw Error(ErrorKind::schema, "missing column 'user_id'", 1);
  if (time_col < 0) throw Error(ErrorKind::schema, "missing column 'timestamp'", 1);
  const auto needed = static_cast<std::size_t>(std::max(user_col, time_col)) + 1;

  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto fields = io::split_csv(line);
    if (fields.size() < needed) {
      throw Error(ErrorKind::schema, fmt::format("line {}: missing column", line_no), line_no);
    }
    std::int64_t user = 0, ts = 0;
    if (!io::parse_int(fields[static_cast<std::size_t>(user_col)], user)) {
      throw Error(ErrorKind::schema, fmt::format("line {}: unparsable user id", line_no), line_no);
    }
    if (!io::parse_int(fields[static_cast<std::size_t>(time_col)], ts)) {
      throw Error(ErrorKind::schema, fmt::format("line {}: unparsable timestamp", line_no),
                  line_no);
    }
    rows.push_back(checked_row(user, ts, line_no));
  }
  return rows;
}

std::vector<Row> read_jsonl_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::schema, fmt::format("line {}: {}", line_no, e.what()), line_no);
    }
    if (!j.is_object() || !j.contains("u")) {
      throw Error(ErrorKind::schema, fmt::format("line {}: missing field 'u'", line_no), line_no);
    }
    if (!j.contains("t")) {
      throw Error(ErrorKind::schema, fmt::format("line {}: missing field 't'", line_no), line_no);
    }
    if (!j["u"].is_number_integer()) {
      throw Error(ErrorKind::schema, fmt::format("line {}: unparsable user id", line_no), line_no);
    }
    if (!j["t"].is_number_integer()) {
      throw Error(ErrorKind::schema, fmt::format("line {}: unparsable timestamp", line_no),
                  line_no);
    }
    rows.push_back(checked_row(j["u"].get<std::int64_t>(), j["t"].get<std::int64_t>(), line_no));
  }
  return rows;
}

}  // namespace

MessageLog read_log(std::istream& in, LogFormat format, std::string group_name,
                    const WarningSink& warn) {
  const auto rows = format == LogFormat::csv ? read_csv_rows(in) : read_jsonl_rows(in);

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const bool sorted = std::is_sorted(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.timestamp < b.timestamp;
  });
  if (!sorted) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].timestamp < rows[b].timestamp;
    });
    if (warn) warn(fmt::format("{}: rows out of chronological order; re-sorted", group_name));
  }

  std::vector<MessageEvent> events;
  events.reserve(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& r = rows[order[i]];
    events.push_back({static_cast<UserId>(r.user), r.timestamp, static_cast<std::int64_t>(i)});
  }
  return MessageLog(std::move(group_name), std::move(events));
}

MessageLog load_log(const std::string& path, LogFormat format, const WarningSink& warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return read_log(in, format, std::filesystem::path(path).stem().string(), warn);
}

void write_log(std::ostream& out, const MessageLog& log, LogFormat format) {
  if (format == LogFormat::csv) {
    out << "user_id,timestamp\n";
    for (const auto& e : log.events()) out << e.user << ',' << e.timestamp << '\n';
  } else {
    for (const auto& e : log.events()) out << "{\"u\":" << e.user << ",\"t\":" << e.timestamp << "}\n";
  }
}

}  // namespace engage
