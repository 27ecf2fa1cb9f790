#include "gaudin_pair/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gaudin_pair {

std::string to_string(Command command) {
  switch (command) {
    case Command::verify: return "verify";
    case Command::solve: return "solve";
    case Command::spectrum: return "spectrum";
    case Command::oracle: return "oracle";
    case Command::compare: return "compare";
  }
  return "?";
}

Command parse_command(const std::string& text) {
  for (Command c : {Command::verify, Command::solve, Command::spectrum, Command::oracle, Command::compare})
    if (text == to_string(c)) return c;
  throw DomainError("unknown command '" + text + "' (expected verify, solve, spectrum, oracle or compare)");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "table") return OutputFormat::table;
  throw DomainError("unknown format '" + text + "' (expected csv or table)");
}

namespace {

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

PairRange parse_pair_range(const std::string& text) {
  const std::string_view view = trim(text);
  const auto dots = view.find("..");
  PairRange range;
  if (dots == std::string_view::npos) {
    const auto n = parse_number<int>(view);
    if (!n) throw DomainError("pairs must be N or N..M, got '" + text + "'");
    range = {*n, *n};
  } else {
    const auto a = parse_number<int>(trim(view.substr(0, dots)));
    const auto b = parse_number<int>(trim(view.substr(dots + 2)));
    if (!a || !b) throw DomainError("pairs must be N or N..M, got '" + text + "'");
    range = {*a, *b};
  }
  if (range.first < 0 || range.first > range.last)
    throw DomainError("pair range '" + text + "' must satisfy 0 <= N <= M");
  return range;
}

PairRange RunConfig::pair_range() const {
  return pairs.value_or(PairRange{0, scheme.max_pairs()});
}

namespace {

struct RawLevel {
  std::optional<int> omega;
  double epsilon = 0.0;
  std::optional<double> c;
  int line = 0;
};

class Parser {
 public:
  Parser(std::string origin) : origin_(std::move(origin)) {}

  RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      const std::string_view body = trim(line);
      if (body.empty()) continue;
      const int column = static_cast<int>(body.data() - raw.data()) + 1;
      if (body.front() == '[') {
        if (body != "[level]") syntax(line_no, column, "unknown section " + std::string(body) + " (only [level])");
        levels_.push_back(RawLevel{});
        levels_.back().line = line_no;
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) syntax(line_no, column, "expected key = value");
      const std::string key(trim(body.substr(0, eq)));
      const std::string_view value = trim(body.substr(eq + 1));
      const int value_column = static_cast<int>(value.data() - raw.data()) + 1;
      if (key.empty()) syntax(line_no, column, "missing key before '='");
      if (value.empty()) syntax(line_no, value_column, "missing value for '" + key + "'");
      assign(key, value, line_no, column, value_column);
    }
    return finish();
  }

 private:
  [[noreturn]] void syntax(int line, int column, const std::string& message) const {
    std::ostringstream msg;
    msg << origin_ << ":" << line << ":" << column << ": " << message;
    throw ConfigError(msg.str(), line, column);
  }

  template <typename T>
  T number(std::string_view value, int line, int column, const std::string& key) const {
    const auto parsed = parse_number<T>(value);
    if (!parsed) syntax(line, column, "'" + key + "' expects a number, got '" + std::string(value) + "'");
    return *parsed;
  }

  void assign(const std::string& key, std::string_view value, int line, int key_column, int column) {
    if (!levels_.empty() && (key == "omega" || key == "epsilon" || key == "c")) {
      RawLevel& level = levels_.back();
      if (key == "omega")
        level.omega = number<int>(value, line, column, key);
      else if (key == "epsilon")
        level.epsilon = number<double>(value, line, column, key);
      else
        level.c = number<double>(value, line, column, key);
      return;
    }
    if (!levels_.empty()) syntax(line, key_column, "top-level key '" + key + "' after the first [level] section");
    const std::string text(value);
    try {
      if (key == "mode") mode_ = parse_mode(text);
      else if (key == "g") g_ = number<double>(value, line, column, key);
      else if (key == "command") config_.command = parse_command(text);
      else if (key == "pairs") config_.pairs = parse_pair_range(text);
      else if (key == "format") config_.format = parse_format(text);
      else if (key == "out") config_.out_path = text;
      else if (key == "seed") config_.solver.seed = number<std::uint64_t>(value, line, column, key);
      else if (key == "tol_newton") config_.solver.newton_tolerance = number<double>(value, line, column, key);
      else if (key == "tol_sep") config_.solver.separation_tolerance = number<double>(value, line, column, key);
      else if (key == "seeds_per_pair") config_.solver.seeds_per_pair = number<int>(value, line, column, key);
      else if (key == "max_iterations") config_.solver.max_iterations = number<int>(value, line, column, key);
      else if (key == "perturb_roots") config_.perturb_roots = number<double>(value, line, column, key);
      else syntax(line, key_column, "unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& err) {
      syntax(line, column, err.what());
    }
  }

  RunConfig finish() {
    if (!mode_) throw ConfigError(origin_ + ": missing 'mode'");
    if (!g_) throw ConfigError(origin_ + ": missing 'g'");
    std::vector<Level> levels;
    for (std::size_t j = 0; j < levels_.size(); ++j) {
      const RawLevel& raw = levels_[j];
      if (!raw.omega)
        syntax(raw.line, 1, "[level] " + std::to_string(j + 1) + " is missing 'omega'");
      if (!raw.c && *mode_ != Mode::reduced)
        syntax(raw.line, 1, "[level] " + std::to_string(j + 1) + " is missing 'c'");
      levels.push_back({*raw.omega, raw.epsilon, raw.c.value_or(1.0)});
    }
    const auto& s = config_.solver;
    if (s.newton_tolerance <= 0.0 || s.separation_tolerance <= 0.0 || s.seeds_per_pair < 1 ||
        s.max_iterations < 1)
      throw ConfigError(origin_ + ": solver parameters must be positive", 0, 0, "solver_parameters");

    try {
      config_.scheme = make_scheme(std::move(levels), *g_, *mode_);
    } catch (const SchemeError& err) {
      std::ostringstream msg;
      msg << origin_ << ": invariant '" << err.invariant() << "' violated";
      if (err.level() >= 0) msg << " at level " << err.level() + 1;
      msg << ": " << err.what();
      throw ConfigError(msg.str(), 0, 0, err.invariant(), err.level() + 1);
    }
    if (config_.pairs && config_.pairs->last > config_.scheme.max_pairs())
      throw ConfigError(origin_ + ": pair range exceeds N_max = " + std::to_string(config_.scheme.max_pairs()), 0,
                        0, "pair_range");

    std::ostringstream note;
    note.precision(17);
    note << "c_j normalized by factor " << config_.scheme.normalization_scale << "; c_j^2 =";
    for (int j = 0; j < config_.scheme.size(); ++j) note << " " << config_.scheme.c_squared(j);
    config_.log.push_back(note.str());
    return config_;
  }

  std::string origin_;
  RunConfig config_;
  std::optional<Mode> mode_;
  std::optional<double> g_;
  std::vector<RawLevel> levels_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) { return Parser(origin).parse(text); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0, 0, "readable");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace gaudin_pair
