#include <engage/cli.hpp>
#include <engage/engagement.hpp>
#include <engage/io.hpp>
#include <engage/temporal.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace engage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::parse, "parse"},       {Command::build, "build"},
    {Command::metrics, "metrics"},   {Command::classify, "classify"},
    {Command::rank, "rank"},         {Command::series, "series"},
    {Command::compare, "compare"},   {Command::simulate, "simulate"},
    {Command::report, "report"},
};

}  // namespace

Command parse_command(std::string_view name) {
  for (const auto& [cmd, text] : kCommands) {
    if (text == name) return cmd;
  }
  throw Error(ErrorKind::parameter, fmt::format("unknown command '{}'", name));
}

std::string_view to_string(Command command) {
  for (const auto& [cmd, text] : kCommands) {
    if (cmd == command) return text;
  }
  return "unknown";
}

WindowSpec RunConfig::window_spec() const {
  WindowSpec spec;
  spec.delta_t = interval_minutes * 60;
  spec.alignment = alignment;
  spec.from = from;
  spec.to = to;
  spec.validate();
  return spec;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::ordering: return exit_code::parse;
    case ErrorKind::schema: return exit_code::schema;
    case ErrorKind::insufficient_data:
    case ErrorKind::degenerate:
    case ErrorKind::not_conversation: return exit_code::insufficient_data;
    case ErrorKind::io: return exit_code::io;
    case ErrorKind::mapping_conflict: return exit_code::mapping_conflict;
    case ErrorKind::parameter: return exit_code::usage;
    case ErrorKind::domain: return exit_code::internal;
  }
  return exit_code::internal;
}

// ---------------------------------------------------------------------------
// Manifest serialization

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

json config_to_json(const RunConfig& c) {
  json regime = {
      {"kind", to_string(c.regime.kind)}, {"users", c.regime.users},
      {"rate", c.regime.rate},            {"windows", c.regime.windows},
      {"seed", c.regime.seed},            {"planted", c.regime.planted},
      {"split_window", optional_json(c.regime.split_window)},
      {"base", c.regime.base},
  };
  return {
      {"command", to_string(c.command)},
      {"inputs", c.inputs},
      {"output_dir", c.output_dir},
      {"profile", c.profile},
      {"tz", c.tz},
      {"slack_seconds", c.slack_seconds},
      {"salt", c.salt_hex},
      {"prior_mapping", optional_json(c.prior_mapping)},
      {"format", to_string(c.format)},
      {"interval_minutes", c.interval_minutes},
      {"align", to_string(c.alignment)},
      {"from", optional_json(c.from)},
      {"to", optional_json(c.to)},
      {"thresholds", {c.thresholds.lo, c.thresholds.hi}},
      {"std", to_string(c.std_mode)},
      {"avg", to_string(c.averaging)},
      {"top_k", c.top_k},
      {"users", c.users},
      {"split", optional_json(c.split)},
      {"drop_threshold", optional_json(c.drop_threshold)},
      {"regime", regime},
  };
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = parse_command(j.at("command").get<std::string>());
  c.inputs = j.at("inputs").get<std::vector<std::string>>();
  c.output_dir = j.at("output_dir").get<std::string>();
  c.profile = j.at("profile").get<std::string>();
  c.tz = j.at("tz").get<std::string>();
  c.slack_seconds = j.at("slack_seconds").get<std::int64_t>();
  c.salt_hex = j.at("salt").get<std::string>();
  c.prior_mapping = optional_from<std::string>(j, "prior_mapping");
  c.format = parse_log_format(j.at("format").get<std::string>());
  c.interval_minutes = j.at("interval_minutes").get<std::int64_t>();
  c.alignment = parse_alignment(j.at("align").get<std::string>());
  c.from = optional_from<Timestamp>(j, "from");
  c.to = optional_from<Timestamp>(j, "to");
  const auto th = j.at("thresholds").get<std::vector<double>>();
  if (th.size() != 2) throw Error(ErrorKind::schema, "manifest thresholds must have two values");
  c.thresholds = {th[0], th[1]};
  c.std_mode = parse_std_mode(j.at("std").get<std::string>());
  c.averaging = parse_averaging_mode(j.at("avg").get<std::string>());
  c.top_k = j.at("top_k").get<std::size_t>();
  c.users = j.at("users").get<std::vector<UserId>>();
  c.split = optional_from<Timestamp>(j, "split");
  c.drop_threshold = optional_from<double>(j, "drop_threshold");
  const auto& r = j.at("regime");
  c.regime.kind = parse_regime_kind(r.at("kind").get<std::string>());
  c.regime.users = r.at("users").get<int>();
  c.regime.rate = r.at("rate").get<int>();
  c.regime.windows = r.at("windows").get<int>();
  c.regime.seed = r.at("seed").get<std::uint64_t>();
  c.regime.planted = r.at("planted").get<int>();
  c.regime.split_window = optional_from<int>(r, "split_window");
  c.regime.base = r.at("base").get<Timestamp>();
  return c;
}

// ---------------------------------------------------------------------------
// Artifact plumbing

class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + dir_.string() + ": " + ec.message());
  }

  template <typename WriteFn>
  void emit(const std::string& name, WriteFn&& write) {
    std::ostringstream buffer;
    write(buffer);
    const std::string content = std::move(buffer).str();
    io::write_file_atomic(dir_ / name, content);
    artifacts_.push_back({{"name", name}, {"sha256", io::sha256_hex(content)}});
  }

  const json& artifacts() const { return artifacts_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  json artifacts_ = json::array();
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return in;
}

void require_inputs(const RunConfig& c, std::size_t count, const char* what) {
  if (c.inputs.size() != count) {
    throw Error(ErrorKind::parameter,
                fmt::format("{} expects {} input(s): {}", to_string(c.command), count, what));
  }
}

bool is_log_path(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  return ext == ".csv" || ext == ".jsonl";
}

std::string log_name(LogFormat format) { return format == LogFormat::csv ? "log.csv" : "log.jsonl"; }

MessageLog parse_into(RunConfig& c, const std::string& path, ArtifactWriter& out) {
  ParseOptions options;
  options.profile = parse_profile(c.profile);
  options.tz = TimeZone::parse(c.tz);
  options.slack_seconds = c.slack_seconds;
  options.group_name = fs::path(path).stem().string();
  auto in = open_input(path);
  const auto parsed = parse_export(in, options);

  if (c.salt_hex.empty()) c.salt_hex = encode_hex(random_salt());
  std::optional<SenderMapping> prior;
  if (c.prior_mapping) {
    auto min = open_input(*c.prior_mapping);
    prior = read_mapping(min);
  }
  auto anon = anonymize(parsed, decode_hex(c.salt_hex), prior ? &*prior : nullptr);
  out.emit(log_name(c.format), [&](std::ostream& os) { write_log(os, anon.log, c.format); });
  out.emit("mapping.csv", [&](std::ostream& os) { write_mapping(os, anon.mapping); });
  return std::move(anon.log);
}

MessageLog load_input_log(const std::string& path, std::ostream& log) {
  return load_log(path, log_format_for_path(path),
                  [&](std::string_view w) { log << "warning: " << w << '\n'; });
}

NetworkEnsemble load_ensemble(const std::string& path) {
  auto in = open_input(path);
  return read_ensemble(in, fs::path(path).stem().string());
}

void emit_metrics(ArtifactWriter& out, std::span<const WindowMetrics> metrics,
                  std::span<const WindowCentralities> centralities) {
  out.emit("metrics.csv", [&](std::ostream& os) { write_metrics(os, metrics); });
  out.emit("centralities.csv", [&](std::ostream& os) { write_centralities(os, centralities); });
}

std::vector<ClassifiedNetwork> emit_classification(ArtifactWriter& out, const RunConfig& c,
                                                   std::span<const WindowMetrics> metrics) {
  const auto stats = ensemble_stats(metrics, c.std_mode);
  const auto classified = zscore_classify(metrics, stats, c.thresholds);
  out.emit("classified.csv", [&](std::ostream& os) { write_classified(os, classified); });
  out.emit("histogram.json", [&](std::ostream& os) { write_histogram(os, z_histogram(classified)); });
  out.emit("ensemble_stats.json", [&](std::ostream& os) {
    os << json{{"mean_ei", stats.mean_ei}, {"std_ei", stats.std_ei}, {"count", stats.count},
               {"std", to_string(c.std_mode)}}
              .dump()
       << '\n';
  });
  return classified;
}

void emit_rankings(ArtifactWriter& out, const RunConfig& c,
                   std::span<const WindowCentralities> centralities,
                   std::span<const ClassifiedNetwork> classified) {
  for (auto cls : {RankClass::high, RankClass::medium, RankClass::low, RankClass::global}) {
    const auto ranking = rank_users(centralities, classified, cls, c.top_k, c.averaging);
    out.emit(fmt::format("ranking_{}.csv", to_string(cls)),
             [&](std::ostream& os) { write_ranking(os, ranking); });
  }
}

void emit_series(ArtifactWriter& out, const RunConfig& c,
                 std::span<const WindowCentralities> centralities) {
  for (auto user : c.users) {
    const auto series = user_series(centralities, user);
    out.emit(fmt::format("series_{}.csv", user), [&](std::ostream& os) { write_series(os, series); });
  }
}

void emit_comparison(ArtifactWriter& out, const RunConfig& c,
                     std::span<const WindowCentralities> centralities) {
  const auto cmp = period_compare(centralities, *c.split, c.top_k, c.averaging);
  out.emit("period_compare.csv", [&](std::ostream& os) { write_period_compare(os, cmp.users); });
  out.emit("period_compare.json", [&](std::ostream& os) { write_period_plot(os, cmp); });
  if (c.drop_threshold) {
    const auto drops = engagement_drop_report(cmp, *c.drop_threshold);
    out.emit("engagement_drops.csv", [&](std::ostream& os) { write_period_compare(os, drops); });
  }
}

void write_manifest(const RunConfig& c, const ArtifactWriter& out) {
  json inputs = json::array();
  auto digest = [&](const std::string& path) {
    inputs.push_back({{"path", path}, {"sha256", io::sha256_hex(io::read_file(path))}});
  };
  for (const auto& p : c.inputs) digest(p);
  if (c.prior_mapping) digest(*c.prior_mapping);
  const json manifest = {{"tool", "engage"},
                         {"version", kVersion},
                         {"config", config_to_json(c)},
                         {"inputs", inputs},
                         {"artifacts", out.artifacts()}};
  io::write_file_atomic(out.dir() / "manifest.json", manifest.dump(2) + "\n");
}

void execute(RunConfig& c, ArtifactWriter& out, std::ostream& log) {
  switch (c.command) {
    case Command::parse: {
      require_inputs(c, 1, "transcript");
      const auto parsed = parse_into(c, c.inputs[0], out);
      log << fmt::format("parsed {} messages from {} users\n", parsed.size(), parsed.user_count());
      break;
    }
    case Command::build: {
      require_inputs(c, 1, "message log");
      const auto msgs = load_input_log(c.inputs[0], log);
      const auto ensemble = build_ensemble(msgs, c.window_spec());
      out.emit("ensemble.jsonl", [&](std::ostream& os) { write_ensemble(os, ensemble); });
      log << fmt::format("{} windows, {} conversations\n", ensemble.size(),
                         ensemble.conversation_count());
      break;
    }
    case Command::metrics: {
      require_inputs(c, 1, "ensemble.jsonl");
      const auto ensemble = load_ensemble(c.inputs[0]);
      emit_metrics(out, ensemble_metrics(ensemble), ensemble_centralities(ensemble));
      break;
    }
    case Command::classify: {
      require_inputs(c, 1, "metrics.csv");
      auto in = open_input(c.inputs[0]);
      const auto metrics = read_metrics(in);
      emit_classification(out, c, metrics);
      break;
    }
    case Command::rank: {
      require_inputs(c, 2, "ensemble.jsonl classified.csv");
      const auto ensemble = load_ensemble(c.inputs[0]);
      auto in = open_input(c.inputs[1]);
      const auto classified = read_classified(in);
      emit_rankings(out, c, ensemble_centralities(ensemble), classified);
      break;
    }
    case Command::series: {
      require_inputs(c, 1, "ensemble.jsonl");
      if (c.users.empty()) throw Error(ErrorKind::parameter, "series needs at least one --user");
      emit_series(out, c, ensemble_centralities(load_ensemble(c.inputs[0])));
      break;
    }
    case Command::compare: {
      require_inputs(c, 1, "ensemble.jsonl");
      if (!c.split) throw Error(ErrorKind::parameter, "compare needs --split");
      emit_comparison(out, c, ensemble_centralities(load_ensemble(c.inputs[0])));
      break;
    }
    case Command::simulate: {
      require_inputs(c, 0, "none");
      const auto corpus = generate(c.regime, c.window_spec());
      out.emit(log_name(c.format), [&](std::ostream& os) { write_log(os, corpus.log, c.format); });
      out.emit("ground_truth.jsonl", [&](std::ostream& os) { write_ground_truth(os, corpus); });
      log << fmt::format("generated {} messages\n", corpus.log.size());
      break;
    }
    case Command::report: {
      require_inputs(c, 1, "message log or transcript");
      const auto msgs =
          is_log_path(c.inputs[0]) ? load_input_log(c.inputs[0], log) : parse_into(c, c.inputs[0], out);
      const auto ensemble = build_ensemble(msgs, c.window_spec());
      out.emit("ensemble.jsonl", [&](std::ostream& os) { write_ensemble(os, ensemble); });
      const auto metrics = ensemble_metrics(ensemble);
      const auto centralities = ensemble_centralities(ensemble);
      emit_metrics(out, metrics, centralities);
      const auto classified = emit_classification(out, c, metrics);
      emit_rankings(out, c, centralities, classified);
      emit_series(out, c, centralities);
      if (c.split) emit_comparison(out, c, centralities);
      log << fmt::format("{} messages, {} conversations\n", msgs.size(), metrics.size());
      break;
    }
  }
}

}  // namespace

void run(RunConfig config, std::ostream& log) {
  ArtifactWriter out(config.output_dir);
  try {
    execute(config, out, log);
  } catch (...) {
    write_manifest(config, out);
    throw;
  }
  write_manifest(config, out);
}

RunConfig config_from_manifest(const std::string& manifest_path) {
  json j;
  try {
    j = json::parse(io::read_file(manifest_path));
    return config_from_json(j.at("config"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::schema, fmt::format("bad manifest {}: {}", manifest_path, e.what()));
  }
}

// ---------------------------------------------------------------------------
// Argument parsing

namespace {

struct RawFlags {
  std::string align = "wall";
  std::string from, to, split;
  std::string thresholds = "-1,1";
  std::string avg = "zero";
  std::string std_mode = "pop";
  std::string format = "csv";
  std::string regime = "round-robin";
  std::optional<int> split_window;
};

void add_window_flags(CLI::App* app, RunConfig& c, RawFlags& f) {
  app->add_option("--interval", c.interval_minutes, "window length in minutes")
      ->check(CLI::PositiveNumber);
  app->add_option("--align", f.align, "window alignment")->check(CLI::IsMember({"wall", "first"}));
  app->add_option("--from", f.from, "range start (ISO date, inclusive)");
  app->add_option("--to", f.to, "range end (ISO date, exclusive)");
}

void add_parse_flags(CLI::App* app, RunConfig& c, RawFlags& f) {
  app->add_option("--profile", c.profile, "transcript grammar")
      ->check(CLI::IsMember({"whatsapp-en-dash", "whatsapp-us-dash", "whatsapp-bracket"}));
  app->add_option("--tz", c.tz, "transcript time zone (UTC, +HH:MM or IANA name)");
  app->add_option("--slack", c.slack_seconds, "allowed backward timestamp movement (s)");
  app->add_option("--salt", c.salt_hex, "anonymization salt (hex)");
  app->add_option("--mapping", c.prior_mapping, "prior mapping.csv to honor");
  app->add_option("--format", f.format, "log output format")->check(CLI::IsMember({"csv", "jsonl"}));
}

void add_class_flags(CLI::App* app, RawFlags& f) {
  app->add_option("--thresholds", f.thresholds, "z-score class thresholds lo,hi");
  app->add_option("--std", f.std_mode, "standard deviation")->check(CLI::IsMember({"pop", "sample"}));
}

void add_rank_flags(CLI::App* app, RunConfig& c, RawFlags& f) {
  app->add_option("--top-k", c.top_k, "entries per ranking (0 = all)");
  app->add_option("--avg", f.avg, "averaging over class networks")
      ->check(CLI::IsMember({"zero", "present"}));
}

void add_temporal_flags(CLI::App* app, RunConfig& c, RawFlags& f) {
  app->add_option("--user", c.users, "user IDs for series output");
  app->add_option("--split", f.split, "period boundary (ISO date, belongs to the second period)");
  app->add_option("--drop-threshold", c.drop_threshold, "report users with diff <= threshold");
}

void finalize(RunConfig& c, const RawFlags& f) {
  c.alignment = parse_alignment(f.align);
  if (!f.from.empty()) c.from = parse_iso_utc(f.from);
  if (!f.to.empty()) c.to = parse_iso_utc(f.to);
  if (!f.split.empty()) c.split = parse_iso_utc(f.split);
  const auto parts = io::split_csv(f.thresholds);
  if (parts.size() != 2 || !io::parse_real(parts[0], c.thresholds.lo) ||
      !io::parse_real(parts[1], c.thresholds.hi)) {
    throw Error(ErrorKind::parameter, "--thresholds expects lo,hi");
  }
  c.averaging = parse_averaging_mode(f.avg);
  c.std_mode = parse_std_mode(f.std_mode);
  c.format = parse_log_format(f.format);
  c.regime.kind = parse_regime_kind(f.regime);
  c.regime.split_window = f.split_window;
  (void)c.window_spec();
}

void diagnose(std::ostream& err, std::string_view kind, std::string_view message,
              std::optional<std::size_t> line = std::nullopt) {
  json d = {{"error", kind}, {"message", message}};
  if (line) d["line"] = *line;
  err << d.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Engagement analysis of group conversations from message metadata", "engage"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig c;
  RawFlags f;
  std::string manifest_path;
  std::string rerun_out;

  auto with_output = [&](CLI::App* sub) {
    sub->add_option("-o,--out", c.output_dir, "output directory");
    return sub;
  };

  auto* parse = with_output(app.add_subcommand("parse", "transcript -> anonymized log + mapping"));
  parse->add_option("input", c.inputs, "exported transcript")->required();
  add_parse_flags(parse, c, f);

  auto* build = with_output(app.add_subcommand("build", "log -> ensemble.jsonl"));
  build->add_option("input", c.inputs, "log (.csv or .jsonl)")->required();
  add_window_flags(build, c, f);

  auto* metrics = with_output(app.add_subcommand("metrics", "ensemble -> metrics + centralities"));
  metrics->add_option("input", c.inputs, "ensemble.jsonl")->required();

  auto* classify = with_output(app.add_subcommand("classify", "metrics -> z-score classes"));
  classify->add_option("input", c.inputs, "metrics.csv")->required();
  add_class_flags(classify, f);

  auto* rank = with_output(app.add_subcommand("rank", "ensemble + classes -> user rankings"));
  rank->add_option("inputs", c.inputs, "ensemble.jsonl classified.csv")->required()->expected(2);
  add_rank_flags(rank, c, f);

  auto* series = with_output(app.add_subcommand("series", "per-user EI centrality series"));
  series->add_option("input", c.inputs, "ensemble.jsonl")->required();
  add_temporal_flags(series, c, f);

  auto* compare = with_output(app.add_subcommand("compare", "two-period engagement comparison"));
  compare->add_option("input", c.inputs, "ensemble.jsonl")->required();
  add_temporal_flags(compare, c, f);
  compare->add_option("--top-k", c.top_k, "users in the comparison (0 = all)");
  compare->add_option("--avg", f.avg, "averaging")->check(CLI::IsMember({"zero", "present"}));

  auto* simulate = with_output(app.add_subcommand("simulate", "synthetic log + ground truth"));
  simulate->add_option("--regime", f.regime, "generator regime")
      ->check(CLI::IsMember(
          {"round-robin", "broadcaster", "dominant-pair", "uniform-random", "planted-dropout"}));
  simulate->add_option("--users", c.regime.users, "users (background users for planted-dropout)");
  simulate->add_option("--rate", c.regime.rate, "messages per active window");
  simulate->add_option("--windows", c.regime.windows, "active windows");
  simulate->add_option("--seed", c.regime.seed, "PRNG seed");
  simulate->add_option("--planted", c.regime.planted, "planted dropout users");
  simulate->add_option("--split-window", f.split_window, "first window of the second period");
  simulate->add_option("--base", c.regime.base, "epoch seconds of the first window");
  simulate->add_option("--interval", c.interval_minutes, "window length in minutes")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--format", f.format, "log format")->check(CLI::IsMember({"csv", "jsonl"}));

  auto* report = with_output(app.add_subcommand("report", "log or transcript -> every artifact"));
  report->add_option("input", c.inputs, "log (.csv/.jsonl) or transcript")->required();
  add_parse_flags(report, c, f);
  add_window_flags(report, c, f);
  add_class_flags(report, f);
  add_rank_flags(report, c, f);
  add_temporal_flags(report, c, f);

  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest.json");
  rerun->add_option("manifest", manifest_path, "manifest.json")->required();
  rerun->add_option("-o,--out", rerun_out, "output directory (default: as recorded)");

  std::vector<std::string> argv_storage{"engage"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", e.what());
    return exit_code::usage;
  }

  try {
    if (rerun->parsed()) {
      auto recorded = config_from_manifest(manifest_path);
      if (!rerun_out.empty()) recorded.output_dir = rerun_out;
      run(std::move(recorded), err);
      return exit_code::ok;
    }
    c.command = parse_command(app.get_subcommands().front()->get_name());
    finalize(c, f);
    run(std::move(c), err);
    return exit_code::ok;
  } catch (const Error& e) {
    diagnose(err, to_string(e.kind()), e.what(), e.line());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    diagnose(err, "internal", e.what());
    return exit_code::internal;
  }
}

}  // namespace engage
