#include "fpguard/config.hpp"

#include <cmath>
#include <sstream>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard {

using nlohmann::json;

namespace {

constexpr std::string_view kConfigFormat = "fpguard-config";
constexpr std::string_view kProfileFormat = "fpguard-behavior-profile";

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

const json* member(const json& object, const char* key) {
  auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

void require_object(const json& value, const std::string& path) {
  if (!value.is_object()) bad(path, "expected an object");
}

void reject_unknown(const json& object, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      bad(path + "." + key, "unknown key");
    }
  }
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) bad(path, "expected a number");
  double x = value.get<double>();
  if (!std::isfinite(x)) bad(path, "expected a finite number");
  return x;
}

std::int64_t integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) bad(path, "expected an integer");
  return value.get<std::int64_t>();
}

std::string string(const json& value, const std::string& path) {
  if (!value.is_string()) bad(path, "expected a string");
  return value.get<std::string>();
}

// Rethrows module validation errors with the field path attached.
template <typename Fn>
void checked(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    bad(path, e.what());
  }
}

void check_format(const json& document, std::string_view format, const std::string& path) {
  if (const json* f = member(document, "format"); f && string(*f, path + ".format") != format) {
    bad(path + ".format", "expected '" + std::string(format) + "'");
  }
  if (const json* v = member(document, "version")) {
    std::string version = string(*v, path + ".version");
    auto header = io::parse_header("%fpguard x " + version);
    if (!header || header->major != io::kFormatMajor) {
      bad(path + ".version", "expected " + std::to_string(io::kFormatMajor) + ".x, found " + version);
    }
  }
}

BucketSpec parse_bucket(const json& value, const std::string& path) {
  require_object(value, path);
  const json* kind = member(value, "kind");
  if (kind == nullptr) bad(path + ".kind", "missing");
  const std::string k = string(*kind, path + ".kind");
  BucketSpec spec;
  if (k == "passthrough") {
    reject_unknown(value, path, {"kind"});
    spec = PassThrough{};
  } else if (k == "fixed-width") {
    reject_unknown(value, path, {"kind", "width", "origin"});
    FixedWidth w;
    if (const json* x = member(value, "width")) w.width = number(*x, path + ".width");
    if (const json* x = member(value, "origin")) w.origin = number(*x, path + ".origin");
    spec = w;
  } else if (k == "intervals") {
    reject_unknown(value, path, {"kind", "edges", "display"});
    Intervals iv;
    const json* edges = member(value, "edges");
    if (edges == nullptr || !edges->is_array()) bad(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < edges->size(); ++i) {
      iv.edges.push_back(number((*edges)[i], path + ".edges[" + std::to_string(i) + "]"));
    }
    if (const json* display = member(value, "display")) {
      if (!display->is_array()) bad(path + ".display", "expected an array");
      for (std::size_t i = 0; i < display->size(); ++i) {
        iv.display.push_back(string((*display)[i], path + ".display[" + std::to_string(i) + "]"));
      }
    }
    spec = iv;
  } else if (k == "time-of-day") {
    reject_unknown(value, path, {"kind", "resolution"});
    TimeOfDay t;
    if (const json* r = member(value, "resolution")) {
      std::string res = string(*r, path + ".resolution");
      if (res == "coarse") {
        t.resolution = TimeOfDay::Resolution::kCoarse;
      } else if (res == "hourly") {
        t.resolution = TimeOfDay::Resolution::kHourly;
      } else {
        bad(path + ".resolution", "expected 'coarse' or 'hourly'");
      }
    }
    spec = t;
  } else {
    bad(path + ".kind", "unknown bucket kind '" + k + "'");
  }
  checked(path, [&] { validate(spec); });
  return spec;
}

json bucket_json(const BucketSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PassThrough>) {
          return {{"kind", "passthrough"}};
        } else if constexpr (std::is_same_v<S, FixedWidth>) {
          return {{"kind", "fixed-width"}, {"width", s.width}, {"origin", s.origin}};
        } else if constexpr (std::is_same_v<S, Intervals>) {
          json j = {{"kind", "intervals"}, {"edges", s.edges}};
          if (!s.display.empty()) j["display"] = s.display;
          return j;
        } else {
          return {{"kind", "time-of-day"},
                  {"resolution",
                   s.resolution == TimeOfDay::Resolution::kCoarse ? "coarse" : "hourly"}};
        }
      },
      spec);
}

std::string_view expiring_name(ExpiringKind kind) {
  switch (kind) {
    case ExpiringKind::kStep: return "step";
    case ExpiringKind::kNaturalLog: return "natural-log";
    case ExpiringKind::kPolynomial: return "polynomial";
  }
  return "step";
}

}  // namespace

EngineConfig EngineConfig::defaults() {
  EngineConfig config;
  config.granularity.fallback = PassThrough{};
  config.amount_bucket = Intervals{{0, 10, 50, 100, 500, 2000}, {}};
  config.accumulation.expiring = ExpiringKind::kStep;
  config.accumulation.span_seconds = 24 * 3600;
  config.accumulation.anchoring = Anchoring::kSliding;
  config.accumulation.thresholds = {{250.0, "warn"}, {600.0, "alert"}, {1500.0, "block"}};
  config.cost.challenge_cost = 2.0;
  config.cost.miss_mode = MissCostMode::kFullAmount;
  return config;
}

EngineConfig parse_config(const json& document) {
  const std::string root = "config";
  require_object(document, root);
  reject_unknown(document, root,
                 {"format", "version", "min_sup", "window", "rebuild_fraction", "adaptive_scoring",
                  "epsilon", "weights", "granularity", "accumulation", "evaluation", "parse_mode"});
  check_format(document, kConfigFormat, root);
  EngineConfig config = EngineConfig::defaults();

  if (const json* v = member(document, "min_sup")) {
    const std::string path = root + ".min_sup";
    checked(path, [&] {
      config.min_sup = v->is_string() ? MinSupport::parse(v->get<std::string>())
                                      : MinSupport::from_double(number(*v, path));
    });
  }
  if (const json* v = member(document, "window")) {
    const std::string path = root + ".window";
    require_object(*v, path);
    reject_unknown(*v, path, {"kind", "size", "seconds"});
    const json* kind = member(*v, "kind");
    if (kind == nullptr) bad(path + ".kind", "missing");
    const std::string k = string(*kind, path + ".kind");
    if (k == "count") {
      const json* size = member(*v, "size");
      if (size == nullptr) bad(path + ".size", "missing");
      std::int64_t n = integer(*size, path + ".size");
      if (n < 1) bad(path + ".size", "must be at least 1");
      config.window = CountWindow{static_cast<std::size_t>(n)};
    } else if (k == "time") {
      const json* seconds = member(*v, "seconds");
      if (seconds == nullptr) bad(path + ".seconds", "missing");
      std::int64_t s = integer(*seconds, path + ".seconds");
      if (s < 1) bad(path + ".seconds", "must be positive");
      config.window = TimeWindow{s};
    } else {
      bad(path + ".kind", "expected 'count' or 'time'");
    }
  }
  if (const json* v = member(document, "rebuild_fraction")) {
    config.rebuild_fraction = number(*v, root + ".rebuild_fraction");
    if (!(config.rebuild_fraction > 0.0) || config.rebuild_fraction > 1.0) {
      bad(root + ".rebuild_fraction", "must lie in (0, 1]");
    }
  }
  if (const json* v = member(document, "adaptive_scoring")) {
    if (!v->is_boolean()) bad(root + ".adaptive_scoring", "expected a boolean");
    config.adaptive_scoring = v->get<bool>();
  }
  if (const json* v = member(document, "epsilon")) {
    config.credit.epsilon = number(*v, root + ".epsilon");
    checked(root + ".epsilon", [&] { validate(config.credit); });
  }
  if (const json* v = member(document, "weights")) {
    const std::string path = root + ".weights";
    require_object(*v, path);
    reject_unknown(*v, path, {"default", "attributes"});
    double fallback = 1.0;
    std::map<std::string, double> overrides;
    if (const json* d = member(*v, "default")) fallback = number(*d, path + ".default");
    if (const json* a = member(*v, "attributes")) {
      require_object(*a, path + ".attributes");
      for (const auto& [name, w] : a->items()) {
        overrides[name] = number(w, path + ".attributes." + name);
      }
    }
    checked(path, [&] { config.weights = WeightTable(fallback, std::move(overrides)); });
  }
  if (const json* v = member(document, "granularity")) {
    const std::string path = root + ".granularity";
    require_object(*v, path);
    reject_unknown(*v, path, {"default", "attributes", "amount"});
    config.granularity.fallback.reset();
    if (const json* d = member(*v, "default"); d && !d->is_null()) {
      config.granularity.fallback = parse_bucket(*d, path + ".default");
    }
    if (const json* a = member(*v, "attributes")) {
      require_object(*a, path + ".attributes");
      for (const auto& [name, spec] : a->items()) {
        config.granularity.attributes[name] = parse_bucket(spec, path + ".attributes." + name);
      }
    }
    if (const json* a = member(*v, "amount")) {
      if (a->is_null()) {
        config.amount_bucket.reset();
      } else {
        config.amount_bucket = parse_bucket(*a, path + ".amount");
      }
    }
  }
  if (const json* v = member(document, "accumulation")) {
    const std::string path = root + ".accumulation";
    require_object(*v, path);
    reject_unknown(*v, path, {"expiring", "degree", "span_seconds", "anchoring", "thresholds"});
    AccumulatorConfig& acc = config.accumulation;
    if (const json* e = member(*v, "expiring")) {
      std::string kind = string(*e, path + ".expiring");
      if (kind == "step") {
        acc.expiring = ExpiringKind::kStep;
      } else if (kind == "natural-log") {
        acc.expiring = ExpiringKind::kNaturalLog;
      } else if (kind == "polynomial") {
        acc.expiring = ExpiringKind::kPolynomial;
      } else {
        bad(path + ".expiring", "expected 'step', 'natural-log' or 'polynomial'");
      }
    }
    if (const json* d = member(*v, "degree")) {
      std::int64_t degree = integer(*d, path + ".degree");
      if (degree < 1 || degree > 16) bad(path + ".degree", "must lie in [1, 16]");
      acc.degree = static_cast<int>(degree);
    }
    if (const json* s = member(*v, "span_seconds")) {
      acc.span_seconds = integer(*s, path + ".span_seconds");
      if (acc.span_seconds < 1) bad(path + ".span_seconds", "must be positive");
    }
    if (const json* a = member(*v, "anchoring")) {
      std::string mode = string(*a, path + ".anchoring");
      if (mode == "sliding") {
        acc.anchoring = Anchoring::kSliding;
      } else if (mode == "since-last-update") {
        acc.anchoring = Anchoring::kSinceLastUpdate;
      } else {
        bad(path + ".anchoring", "expected 'sliding' or 'since-last-update'");
      }
    }
    if (const json* t = member(*v, "thresholds")) {
      if (!t->is_array()) bad(path + ".thresholds", "expected an array");
      acc.thresholds.clear();
      for (std::size_t i = 0; i < t->size(); ++i) {
        const std::string item = path + ".thresholds[" + std::to_string(i) + "]";
        require_object((*t)[i], item);
        reject_unknown((*t)[i], item, {"value", "severity"});
        const json* value = member((*t)[i], "value");
        const json* severity = member((*t)[i], "severity");
        if (value == nullptr) bad(item + ".value", "missing");
        if (severity == nullptr) bad(item + ".severity", "missing");
        Threshold threshold{number(*value, item + ".value"), string(*severity, item + ".severity")};
        if (threshold.severity == "-") bad(item + ".severity", "'-' is reserved");
        acc.thresholds.push_back(std::move(threshold));
      }
      if (acc.thresholds.empty()) bad(path + ".thresholds", "at least one threshold is required");
    }
    checked(path, [&] { validate(acc); });
  }
  if (const json* v = member(document, "evaluation")) {
    const std::string path = root + ".evaluation";
    require_object(*v, path);
    reject_unknown(*v, path, {"alert_threshold", "challenge_cost", "miss_cost"});
    if (const json* t = member(*v, "alert_threshold")) {
      config.alert_threshold = number(*t, path + ".alert_threshold");
    }
    if (const json* c = member(*v, "challenge_cost")) {
      config.cost.challenge_cost = number(*c, path + ".challenge_cost");
    }
    if (const json* m = member(*v, "miss_cost")) {
      if (m->is_string() && m->get<std::string>() == "full-amount") {
        config.cost.miss_mode = MissCostMode::kFullAmount;
      } else if (m->is_object() && member(*m, "fixed") != nullptr && m->size() == 1) {
        config.cost.miss_mode = MissCostMode::kFixedPerMiss;
        config.cost.fixed_miss_cost = number((*m)["fixed"], path + ".miss_cost.fixed");
      } else {
        bad(path + ".miss_cost", "expected \"full-amount\" or {\"fixed\": <value>}");
      }
    }
    checked(path, [&] { validate(config.cost); });
  }
  if (const json* v = member(document, "parse_mode")) {
    std::string mode = string(*v, root + ".parse_mode");
    if (mode == "strict") {
      config.parse_mode = io::ParseMode::kStrict;
    } else if (mode == "lenient") {
      config.parse_mode = io::ParseMode::kLenient;
    } else {
      bad(root + ".parse_mode", "expected 'strict' or 'lenient'");
    }
  }
  return config;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::string contents = io::read_file(path);
  json document;
  try {
    document = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": not valid JSON: " + e.what());
  }
  return parse_config(document);
}

json to_json(const EngineConfig& config) {
  json j;
  j["format"] = kConfigFormat;
  j["version"] = std::to_string(io::kFormatMajor) + "." + std::to_string(io::kFormatMinor);
  j["min_sup"] = config.min_sup.to_string();
  if (const auto* count = std::get_if<CountWindow>(&config.window)) {
    j["window"] = {{"kind", "count"}, {"size", count->count}};
  } else {
    j["window"] = {{"kind", "time"}, {"seconds", std::get<TimeWindow>(config.window).seconds}};
  }
  j["rebuild_fraction"] = config.rebuild_fraction;
  j["adaptive_scoring"] = config.adaptive_scoring;
  j["epsilon"] = config.credit.epsilon;
  j["weights"] = {{"default", config.weights.default_weight()},
                  {"attributes", config.weights.overrides()}};
  json granularity = json::object();
  granularity["default"] =
      config.granularity.fallback ? bucket_json(*config.granularity.fallback) : json(nullptr);
  granularity["attributes"] = json::object();
  for (const auto& [name, spec] : config.granularity.attributes) {
    granularity["attributes"][name] = bucket_json(spec);
  }
  granularity["amount"] = config.amount_bucket ? bucket_json(*config.amount_bucket) : json(nullptr);
  j["granularity"] = granularity;
  json thresholds = json::array();
  for (const Threshold& t : config.accumulation.thresholds) {
    thresholds.push_back({{"value", t.alert_value}, {"severity", t.severity}});
  }
  j["accumulation"] = {
      {"expiring", expiring_name(config.accumulation.expiring)},
      {"degree", config.accumulation.degree},
      {"span_seconds", config.accumulation.span_seconds},
      {"anchoring",
       config.accumulation.anchoring == Anchoring::kSliding ? "sliding" : "since-last-update"},
      {"thresholds", thresholds}};
  json miss = config.cost.miss_mode == MissCostMode::kFullAmount
                  ? json("full-amount")
                  : json{{"fixed", config.cost.fixed_miss_cost}};
  j["evaluation"] = {{"alert_threshold", config.alert_threshold},
                     {"challenge_cost", config.cost.challenge_cost},
                     {"miss_cost", miss}};
  j["parse_mode"] = config.parse_mode == io::ParseMode::kStrict ? "strict" : "lenient";
  return j;
}

Transaction prepare(const Transaction& raw, const EngineConfig& config) {
  validate(raw);
  std::map<std::string, std::string> record;
  for (const Item& item : raw.items) record.emplace(item.attribute(), item.value());
  Transaction prepared{raw.entity_id, raw.timestamp, discretize(record, config.granularity),
                       raw.amount};
  if (config.amount_bucket) {
    if (record.contains("amount")) {
      throw ConfigError("transaction already carries an 'amount' item; disable the amount bucket");
    }
    prepared.items.emplace("amount", bucket_label(*config.amount_bucket, "amount",
                                                  text::format_number(raw.amount)));
  }
  return prepared;
}

namespace {

json categorical_json(const Categorical& c) {
  json j = json::array();
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    j.push_back({{"value", c.values[i]}, {"weight", c.weights[i]}});
  }
  return j;
}

Categorical parse_categorical(const json& value, const std::string& path) {
  if (!value.is_array()) bad(path, "expected an array of {value, weight}");
  Categorical c;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string item = path + "[" + std::to_string(i) + "]";
    require_object(value[i], item);
    reject_unknown(value[i], item, {"value", "weight"});
    const json* v = member(value[i], "value");
    const json* w = member(value[i], "weight");
    if (v == nullptr || w == nullptr) bad(item, "needs 'value' and 'weight'");
    c.values.push_back(string(*v, item + ".value"));
    c.weights.push_back(number(*w, item + ".weight"));
  }
  return c;
}

template <std::size_t N>
std::array<double, N> fixed_weights(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != N) {
    bad(path, "expected an array of " + std::to_string(N) + " weights");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(value[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Item parse_item_json(const json& value, const std::string& path) {
  require_object(value, path);
  const json* a = member(value, "attribute");
  const json* v = member(value, "value");
  if (a == nullptr || v == nullptr) bad(path, "needs 'attribute' and 'value'");
  try {
    return Item(string(*a, path + ".attribute"), string(*v, path + ".value"));
  } catch (const ContractError& e) {
    bad(path, e.what());
  }
}

json item_json(const Item& item) { return {{"attribute", item.attribute()}, {"value", item.value()}}; }

}  // namespace

json to_json(const BehaviorProfile& profile) {
  json j;
  j["format"] = kProfileFormat;
  j["version"] = std::to_string(io::kFormatMajor) + "." + std::to_string(io::kFormatMinor);
  j["name"] = profile.name;
  json attributes = json::array();
  for (const auto& [name, dist] : profile.attributes) {
    attributes.push_back({{"name", name}, {"distribution", categorical_json(dist)}});
  }
  j["attributes"] = attributes;
  json correlations = json::array();
  for (const Correlation& c : profile.correlations) {
    json condition = json::array();
    for (const Item& item : c.condition) condition.push_back(item_json(item));
    correlations.push_back(
        {{"if", condition}, {"boost", item_json(c.boosted)}, {"factor", c.factor}});
  }
  j["correlations"] = correlations;
  j["timing"] = {{"day_of_week", profile.timing.day_of_week},
                 {"hour_of_day", profile.timing.hour_of_day},
                 {"transactions_per_week", profile.timing.transactions_per_week}};
  j["amount"] = {{"edges", profile.amount.edges}, {"weights", profile.amount.weights}};
  if (profile.ip.kind == IpModel::Kind::kSmallStableGroup) {
    j["ip"] = {{"kind", "stable-group"}, {"group", categorical_json(profile.ip.group)}};
  } else {
    j["ip"] = {{"kind", "dynamic"},
               {"first_octet_min", profile.ip.first_octet_min},
               {"first_octet_max", profile.ip.first_octet_max}};
  }
  return j;
}

BehaviorProfile parse_behavior_profile(const json& document) {
  const std::string root = "profile";
  require_object(document, root);
  reject_unknown(document, root,
                 {"format", "version", "name", "attributes", "correlations", "timing", "amount", "ip"});
  check_format(document, kProfileFormat, root);
  BehaviorProfile profile;
  const json* name = member(document, "name");
  if (name == nullptr) bad(root + ".name", "missing");
  profile.name = string(*name, root + ".name");

  if (const json* attrs = member(document, "attributes")) {
    if (!attrs->is_array()) bad(root + ".attributes", "expected an array");
    for (std::size_t i = 0; i < attrs->size(); ++i) {
      const std::string path = root + ".attributes[" + std::to_string(i) + "]";
      const json& a = (*attrs)[i];
      require_object(a, path);
      reject_unknown(a, path, {"name", "distribution"});
      const json* n = member(a, "name");
      const json* d = member(a, "distribution");
      if (n == nullptr || d == nullptr) bad(path, "needs 'name' and 'distribution'");
      profile.attributes.emplace_back(string(*n, path + ".name"),
                                      parse_categorical(*d, path + ".distribution"));
    }
  }
  if (const json* corr = member(document, "correlations")) {
    if (!corr->is_array()) bad(root + ".correlations", "expected an array");
    for (std::size_t i = 0; i < corr->size(); ++i) {
      const std::string path = root + ".correlations[" + std::to_string(i) + "]";
      const json& c = (*corr)[i];
      require_object(c, path);
      reject_unknown(c, path, {"if", "boost", "factor"});
      const json* condition = member(c, "if");
      const json* boost = member(c, "boost");
      const json* factor = member(c, "factor");
      if (condition == nullptr || boost == nullptr || factor == nullptr || !condition->is_array()) {
        bad(path, "needs 'if' (array), 'boost' and 'factor'");
      }
      Correlation rule{{}, parse_item_json(*boost, path + ".boost"), number(*factor, path + ".factor")};
      for (std::size_t k = 0; k < condition->size(); ++k) {
        rule.condition.push_back(
            parse_item_json((*condition)[k], path + ".if[" + std::to_string(k) + "]"));
      }
      profile.correlations.push_back(std::move(rule));
    }
  }
  const json* timing = member(document, "timing");
  if (timing == nullptr) bad(root + ".timing", "missing");
  require_object(*timing, root + ".timing");
  reject_unknown(*timing, root + ".timing", {"day_of_week", "hour_of_day", "transactions_per_week"});
  const json* dow = member(*timing, "day_of_week");
  const json* hod = member(*timing, "hour_of_day");
  if (dow == nullptr || hod == nullptr) bad(root + ".timing", "needs day_of_week and hour_of_day");
  profile.timing.day_of_week = fixed_weights<7>(*dow, root + ".timing.day_of_week");
  profile.timing.hour_of_day = fixed_weights<24>(*hod, root + ".timing.hour_of_day");
  if (const json* rate = member(*timing, "transactions_per_week")) {
    profile.timing.transactions_per_week = number(*rate, root + ".timing.transactions_per_week");
  }

  const json* amount = member(document, "amount");
  if (amount == nullptr) bad(root + ".amount", "missing");
  require_object(*amount, root + ".amount");
  reject_unknown(*amount, root + ".amount", {"edges", "weights"});
  for (const char* key : {"edges", "weights"}) {
    const json* arr = member(*amount, key);
    const std::string path = root + ".amount." + key;
    if (arr == nullptr || !arr->is_array()) bad(path, "expected an array");
    auto& target = std::string_view(key) == "edges" ? profile.amount.edges : profile.amount.weights;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      target.push_back(number((*arr)[i], path + "[" + std::to_string(i) + "]"));
    }
  }

  const json* ip = member(document, "ip");
  if (ip == nullptr) bad(root + ".ip", "missing");
  require_object(*ip, root + ".ip");
  const json* kind = member(*ip, "kind");
  if (kind == nullptr) bad(root + ".ip.kind", "missing");
  const std::string k = string(*kind, root + ".ip.kind");
  if (k == "stable-group") {
    reject_unknown(*ip, root + ".ip", {"kind", "group"});
    profile.ip.kind = IpModel::Kind::kSmallStableGroup;
    const json* group = member(*ip, "group");
    if (group == nullptr) bad(root + ".ip.group", "missing");
    profile.ip.group = parse_categorical(*group, root + ".ip.group");
  } else if (k == "dynamic") {
    reject_unknown(*ip, root + ".ip", {"kind", "first_octet_min", "first_octet_max"});
    profile.ip.kind = IpModel::Kind::kDynamicPerTransaction;
    if (const json* lo = member(*ip, "first_octet_min")) {
      profile.ip.first_octet_min = static_cast<int>(integer(*lo, root + ".ip.first_octet_min"));
    }
    if (const json* hi = member(*ip, "first_octet_max")) {
      profile.ip.first_octet_max = static_cast<int>(integer(*hi, root + ".ip.first_octet_max"));
    }
  } else {
    bad(root + ".ip.kind", "expected 'stable-group' or 'dynamic'");
  }
  validate(profile);
  return profile;
}

}  // namespace fpguard
