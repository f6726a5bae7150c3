#include "fpguard/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard::io {

namespace {

constexpr std::string_view kMagic = "%fpguard";
constexpr std::string_view kProfileSuffix = ".fpprofile";

// Yields data lines, skipping blanks and '#' comments. Tracks 1-based
// line numbers for diagnostics.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (text::trim(line).empty() || line.front() == '#') continue;
      return true;
    }
    return false;
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

[[noreturn]] void malformed(std::string_view source, std::size_t line, const std::string& why) {
  throw FormatError(std::string(source) + " line " + std::to_string(line) + ": " + why);
}

std::string field(std::string_view escaped, std::string_view what) {
  auto value = text::unescape(escaped);
  if (!value) throw FormatError("bad escape in " + std::string(what));
  return *value;
}

std::int64_t integer_field(std::string_view raw, std::string_view what) {
  auto value = text::parse_integer(raw);
  if (!value) throw FormatError(std::string(what) + " '" + std::string(raw) + "' is not an integer");
  return *value;
}

std::uint64_t count_field(std::string_view raw, std::string_view what) {
  std::int64_t value = integer_field(raw, what);
  if (value < 0) throw FormatError(std::string(what) + " is negative");
  return static_cast<std::uint64_t>(value);
}

double number_field(std::string_view raw, std::string_view what) {
  auto value = text::parse_number(raw);
  if (!value) throw FormatError(std::string(what) + " '" + std::string(raw) + "' is not a number");
  return *value;
}

std::string format_item(const Item& item) {
  return text::escape(item.attribute()) + "=" + text::escape(item.value());
}

Item parse_item(std::string_view raw) {
  std::size_t eq = text::find_unescaped(raw, '=');
  if (eq == std::string_view::npos) {
    throw FormatError("item '" + std::string(raw) + "' is not attribute=value");
  }
  std::string attribute = field(raw.substr(0, eq), "attribute");
  std::string value = field(raw.substr(eq + 1), "value");
  if (attribute.empty() || value.empty()) {
    throw FormatError("item '" + std::string(raw) + "' has an empty attribute or value");
  }
  return Item(std::move(attribute), std::move(value));
}

// Reads and checks the mandatory header line.
void read_header(LineReader& reader, std::string_view kind, std::string_view source) {
  std::string line;
  if (!reader.next(line)) {
    throw FormatError(std::string(source) + ": empty file, expected " + header_line(kind));
  }
  expect_header(line, kind, source);
}

std::vector<std::string_view> split_fields(std::string_view line, std::size_t expected,
                                           std::string_view source, std::size_t line_number) {
  auto fields = text::split_unescaped(line, '\t');
  if (fields.size() != expected) {
    malformed(source, line_number,
              "expected " + std::to_string(expected) + " fields, found " +
                  std::to_string(fields.size()));
  }
  return fields;
}

}  // namespace

std::string header_line(std::string_view kind) {
  return std::string(kMagic) + " " + std::string(kind) + " " + std::to_string(kFormatMajor) + "." +
         std::to_string(kFormatMinor);
}

std::optional<FormatHeader> parse_header(std::string_view line) {
  std::istringstream in{std::string(text::trim(line))};
  std::string magic, kind, version;
  if (!(in >> magic >> kind >> version) || magic != kMagic) return std::nullopt;
  std::string extra;
  if (in >> extra) return std::nullopt;
  std::size_t dot = version.find('.');
  if (dot == std::string::npos) return std::nullopt;
  auto major = text::parse_integer(std::string_view(version).substr(0, dot));
  auto minor = text::parse_integer(std::string_view(version).substr(dot + 1));
  if (!major || !minor || *major < 0 || *minor < 0) return std::nullopt;
  return FormatHeader{kind, static_cast<int>(*major), static_cast<int>(*minor)};
}

void expect_header(std::string_view line, std::string_view kind, std::string_view source) {
  const std::string expected = std::string(kind) + " " + std::to_string(kFormatMajor) + ".x";
  auto header = parse_header(line);
  if (!header) {
    throw FormatError(std::string(source) + ": expected fpguard " + expected +
                      ", found no fpguard header");
  }
  const std::string found =
      header->kind + " " + std::to_string(header->major) + "." + std::to_string(header->minor);
  if (header->kind != kind || header->major != kFormatMajor) {
    throw FormatError(std::string(source) + ": expected fpguard " + expected + ", found fpguard " +
                      found);
  }
}

Transaction parse_transaction_line(std::string_view line) {
  auto fields = text::split_unescaped(line, '\t');
  if (fields.size() < 3) {
    throw FormatError("expected entity, timestamp and amount, found " +
                      std::to_string(fields.size()) + " field(s)");
  }
  Transaction transaction;
  transaction.entity_id = field(fields[0], "entity id");
  if (transaction.entity_id.empty()) throw FormatError("empty entity id");
  transaction.timestamp = integer_field(fields[1], "timestamp");
  transaction.amount = number_field(fields[2], "amount");
  if (transaction.amount < 0.0) throw FormatError("negative amount");
  for (std::size_t i = 3; i < fields.size(); ++i) {
    Item item = parse_item(fields[i]);
    auto clash = std::find_if(transaction.items.begin(), transaction.items.end(),
                              [&](const Item& other) { return other.attribute() == item.attribute(); });
    if (clash != transaction.items.end()) {
      throw FormatError("duplicate attribute '" + item.attribute() + "'");
    }
    transaction.items.insert(std::move(item));
  }
  return transaction;
}

std::string format_transaction(const Transaction& transaction) {
  std::string line = text::escape(transaction.entity_id);
  line += '\t';
  line += std::to_string(transaction.timestamp);
  line += '\t';
  line += text::format_number(transaction.amount);
  for (const Item& item : transaction.items) {
    line += '\t';
    line += format_item(item);
  }
  return line;
}

std::vector<Transaction> parse_transactions(std::istream& in, ParseMode mode,
                                            ParseReport* report) {
  std::vector<Transaction> transactions;
  LineReader reader(in);
  std::string line;
  bool first = true;
  while (reader.next(line)) {
    if (first && line.front() == '%') {
      first = false;
      expect_header(line, kind::kTransactions, "transactions");
      continue;
    }
    first = false;
    try {
      transactions.push_back(parse_transaction_line(line));
    } catch (const Error& e) {
      std::string problem = "line " + std::to_string(reader.line_number()) + ": " + e.what();
      if (mode == ParseMode::kStrict) throw FormatError("transactions " + problem);
      if (report != nullptr) {
        ++report->skipped;
        report->problems.push_back(std::move(problem));
      }
    }
  }
  return transactions;
}

void write_transactions(std::ostream& out, std::span<const Transaction> transactions) {
  out << header_line(kind::kTransactions) << '\n';
  for (const Transaction& t : transactions) out << format_transaction(t) << '\n';
}

std::vector<Label> parse_labels(std::istream& in) {
  LineReader reader(in);
  read_header(reader, kind::kLabels, "labels");
  std::vector<Label> labels;
  std::string line;
  while (reader.next(line)) {
    std::string_view value = text::trim(line);
    if (value == "legal") {
      labels.push_back(Label::kLegal);
    } else if (value == "fraud") {
      labels.push_back(Label::kFraud);
    } else {
      malformed("labels", reader.line_number(), "unknown label '" + std::string(value) + "'");
    }
  }
  return labels;
}

void write_labels(std::ostream& out, std::span<const Label> labels) {
  out << header_line(kind::kLabels) << '\n';
  for (Label label : labels) out << (label == Label::kFraud ? "fraud" : "legal") << '\n';
}

void write_profile(std::ostream& out, const StoredProfile& profile) {
  const FpTree& tree = profile.tree;
  out << header_line(kind::kProfile) << '\n';
  out << "entity\t" << text::escape(profile.entity_id) << '\n';
  out << "updated_at\t" << profile.updated_at << '\n';
  out << "min_sup\t" << tree.min_support().to_string() << '\n';
  out << "total\t" << tree.total_transactions() << '\n';
  out << "order\t" << tree.header().size() << '\n';
  for (const HeaderEntry& entry : tree.header()) {
    out << format_item(entry.item) << '\t' << entry.total_count << '\n';
  }
  out << "pending\t" << tree.pending().size() << '\n';
  for (const auto& [item, count] : tree.pending()) out << format_item(item) << '\t' << count << '\n';
  auto nodes = tree.preorder();
  out << "nodes\t" << nodes.size() << '\n';
  for (const PreorderEntry& node : nodes) {
    out << node.depth << '\t' << format_item(node.item) << '\t' << node.count << '\n';
  }
}

StoredProfile read_profile(std::istream& in, std::string_view source) {
  LineReader reader(in);
  read_header(reader, kind::kProfile, source);
  std::string line;

  auto keyed = [&](std::string_view key) -> std::string {
    if (!reader.next(line)) malformed(source, reader.line_number() + 1, "missing '" + std::string(key) + "'");
    auto fields = split_fields(line, 2, source, reader.line_number());
    if (fields[0] != key) {
      malformed(source, reader.line_number(),
                "expected '" + std::string(key) + "', found '" + std::string(fields[0]) + "'");
    }
    return std::string(fields[1]);
  };
  auto wrap = [&](auto&& fn) {
    try {
      return fn();
    } catch (const FormatError& e) {
      malformed(source, reader.line_number(), e.what());
    } catch (const ContractError& e) {
      malformed(source, reader.line_number(), e.what());
    } catch (const ConfigError& e) {
      malformed(source, reader.line_number(), e.what());
    }
  };

  StoredProfile profile;
  profile.entity_id = wrap([&] { return field(keyed("entity"), "entity id"); });
  profile.updated_at = wrap([&] { return integer_field(keyed("updated_at"), "updated_at"); });
  MinSupport min_sup = wrap([&] { return MinSupport::parse(keyed("min_sup")); });
  std::uint64_t total = wrap([&] { return count_field(keyed("total"), "total"); });

  std::vector<ItemCount> order;
  std::uint64_t n_order = wrap([&] { return count_field(keyed("order"), "order size"); });
  for (std::uint64_t i = 0; i < n_order; ++i) {
    if (!reader.next(line)) malformed(source, reader.line_number(), "truncated header table");
    auto fields = split_fields(line, 2, source, reader.line_number());
    order.push_back(wrap([&] {
      return ItemCount{parse_item(fields[0]), count_field(fields[1], "count")};
    }));
  }

  std::map<Item, std::uint64_t> pending;
  std::uint64_t n_pending = wrap([&] { return count_field(keyed("pending"), "pending size"); });
  for (std::uint64_t i = 0; i < n_pending; ++i) {
    if (!reader.next(line)) malformed(source, reader.line_number(), "truncated pending tally");
    auto fields = split_fields(line, 2, source, reader.line_number());
    wrap([&] {
      pending[parse_item(fields[0])] = count_field(fields[1], "count");
      return 0;
    });
  }

  std::vector<PreorderEntry> nodes;
  std::uint64_t n_nodes = wrap([&] { return count_field(keyed("nodes"), "node count"); });
  for (std::uint64_t i = 0; i < n_nodes; ++i) {
    if (!reader.next(line)) malformed(source, reader.line_number(), "truncated node list");
    auto fields = split_fields(line, 3, source, reader.line_number());
    nodes.push_back(wrap([&] {
      return PreorderEntry{count_field(fields[0], "depth"), parse_item(fields[1]),
                           count_field(fields[2], "count")};
    }));
  }
  if (reader.next(line)) malformed(source, reader.line_number(), "trailing data after node list");

  profile.tree = wrap([&] {
    return FpTree::from_parts(min_sup, total, order, std::move(pending), nodes);
  });
  return profile;
}

std::string profile_file_name(std::string_view entity_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string name;
  for (unsigned char c : entity_id) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
        c == '_' || c == '-') {
      name += static_cast<char>(c);
    } else {
      name += '%';
      name += kHex[c >> 4];
      name += kHex[c & 0xF];
    }
  }
  // Keep "." and ".." from naming directories.
  if (name.find_first_not_of('.') == std::string::npos) {
    std::string escaped;
    for (std::size_t i = 0; i < name.size(); ++i) escaped += "%2E";
    name = escaped;
  }
  return name + std::string(kProfileSuffix);
}

void save_profiles(const std::filesystem::path& dir,
                   const std::map<std::string, StoredProfile>& profiles) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  // Stale profiles from an earlier run would be picked up by load_profiles.
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == kProfileSuffix) std::filesystem::remove(entry.path());
  }
  for (const auto& [entity, profile] : profiles) {
    std::ostringstream out;
    write_profile(out, profile);
    write_file(dir / profile_file_name(entity), out.str());
  }
}

std::map<std::string, StoredProfile> load_profiles(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("profile directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == kProfileSuffix) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, StoredProfile> profiles;
  for (const auto& file : files) {
    std::istringstream in(read_file(file));
    StoredProfile profile = read_profile(in, file.string());
    std::string entity = profile.entity_id;
    if (!profiles.emplace(entity, std::move(profile)).second) {
      throw FormatError("two profile files for entity '" + entity + "'");
    }
  }
  return profiles;
}

void write_scores(std::ostream& out, std::span<const ScoreRow> rows) {
  out << header_line(kind::kScores) << '\n';
  out << "#index\tentity\ttimestamp\tamount\tsimilarity\tsuspicion\n";
  for (const ScoreRow& row : rows) {
    out << row.index << '\t' << text::escape(row.entity_id) << '\t' << row.timestamp << '\t'
        << text::format_number(row.amount) << '\t' << text::format_number(row.similarity) << '\t'
        << text::format_number(row.suspicion) << '\n';
  }
}

std::vector<ScoreRow> read_scores(std::istream& in, std::string_view source) {
  LineReader reader(in);
  read_header(reader, kind::kScores, source);
  std::vector<ScoreRow> rows;
  std::string line;
  while (reader.next(line)) {
    auto f = split_fields(line, 6, source, reader.line_number());
    try {
      ScoreRow row;
      row.index = count_field(f[0], "index");
      row.entity_id = field(f[1], "entity id");
      row.timestamp = integer_field(f[2], "timestamp");
      row.amount = number_field(f[3], "amount");
      row.similarity = number_field(f[4], "similarity");
      row.suspicion = number_field(f[5], "suspicion");
      if (row.amount < 0.0 || row.similarity < 0.0 || !(row.suspicion > 0.0) ||
          row.suspicion > 1.0) {
        throw FormatError("value out of range");
      }
      rows.push_back(std::move(row));
    } catch (const FormatError& e) {
      malformed(source, reader.line_number(), e.what());
    }
  }
  return rows;
}

void write_alerts(std::ostream& out, std::span<const AlertRow> rows) {
  out << header_line(kind::kAlerts) << '\n';
  out << "#entity\twindow_end\talert_value\tseverity\trecords\n";
  for (const AlertRow& row : rows) {
    out << text::escape(row.entity_id) << '\t' << row.window_end << '\t'
        << text::format_number(row.alert_value) << '\t' << text::escape(row.severity) << '\t'
        << row.record_count << '\n';
  }
}

std::vector<AlertRow> read_alerts(std::istream& in, std::string_view source) {
  LineReader reader(in);
  read_header(reader, kind::kAlerts, source);
  std::vector<AlertRow> rows;
  std::string line;
  while (reader.next(line)) {
    auto f = split_fields(line, 5, source, reader.line_number());
    try {
      rows.push_back(AlertRow{field(f[0], "entity id"), integer_field(f[1], "window end"),
                              number_field(f[2], "alert value"), field(f[3], "severity"),
                              count_field(f[4], "record count")});
    } catch (const FormatError& e) {
      malformed(source, reader.line_number(), e.what());
    }
  }
  return rows;
}

void write_trace(std::ostream& out, std::span<const TraceRow> rows) {
  out << header_line(kind::kAlertTrace) << '\n';
  out << "#index\tentity\ttimestamp\talert_value\tseverity\n";
  for (const TraceRow& row : rows) {
    out << row.index << '\t' << text::escape(row.entity_id) << '\t' << row.timestamp << '\t'
        << text::format_number(row.alert_value) << '\t'
        << (row.severity ? text::escape(*row.severity) : "-") << '\n';
  }
}

std::vector<TraceRow> read_trace(std::istream& in, std::string_view source) {
  LineReader reader(in);
  read_header(reader, kind::kAlertTrace, source);
  std::vector<TraceRow> rows;
  std::string line;
  while (reader.next(line)) {
    auto f = split_fields(line, 5, source, reader.line_number());
    try {
      TraceRow row{count_field(f[0], "index"), field(f[1], "entity id"),
                   integer_field(f[2], "timestamp"), number_field(f[3], "alert value"),
                   std::nullopt};
      if (f[4] != "-") row.severity = field(f[4], "severity");
      rows.push_back(std::move(row));
    } catch (const FormatError& e) {
      malformed(source, reader.line_number(), e.what());
    }
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace fpguard::io
