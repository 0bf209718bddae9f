#include "sparsedyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v))
      throw ConfigError("bad number '" + value + "' for " + where);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + value + "' for " + where);
  }
}

long parse_int(const std::string& value, const std::string& where) {
  const double v = parse_double(value, where);
  const long i = std::lround(v);
  if (i != v) throw ConfigError("expected an integer for " + where);
  return i;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string token;
  for (char ch : value) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) items.push_back(token);
      token.clear();
    } else {
      token.push_back(ch);
    }
  }
  if (!token.empty()) items.push_back(token);
  return items;
}

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& where) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(item, where));
  return out;
}

// Section name -> ordered (key, value) entries.
using SectionMap = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;

SectionMap read_sections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());

  SectionMap sections;
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": empty key");
    sections[current].emplace_back(key, value);
  }
  return sections;
}

class SectionView {
 public:
  SectionView(const SectionMap& map, std::string name) : name_(std::move(name)) {
    auto it = map.find(name_);
    if (it != map.end()) entries_ = &it->second;
  }

  bool exists() const { return entries_ != nullptr; }

  const std::string* find(const std::string& key) const {
    if (!entries_) return nullptr;
    const std::string* found = nullptr;
    for (const auto& [k, v] : *entries_) {
      if (k == key) found = &v;  // last occurrence wins
    }
    return found;
  }

  double number(const std::string& key, double fallback) const {
    const auto* v = find(key);
    return v ? parse_double(*v, "[" + name_ + "] " + key) : fallback;
  }

  long integer(const std::string& key, long fallback) const {
    const auto* v = find(key);
    return v ? parse_int(*v, "[" + name_ + "] " + key) : fallback;
  }

  std::vector<double> numbers(const std::string& key,
                              std::vector<double> fallback) const {
    const auto* v = find(key);
    return v ? parse_double_list(*v, "[" + name_ + "] " + key)
             : std::move(fallback);
  }

  std::string text(const std::string& key, std::string fallback) const {
    const auto* v = find(key);
    return v ? *v : std::move(fallback);
  }

 private:
  std::string name_;
  const std::vector<std::pair<std::string, std::string>>* entries_ = nullptr;
};

}  // namespace

GridSpec ExperimentConfig::make_grid() const {
  return GridSpec(n, x_min, x_max);
}

const RegimeSpec& ExperimentConfig::regime(int id) const {
  for (const auto& r : regimes) {
    if (r.id == id) return r;
  }
  throw ConfigError("regime " + std::to_string(id) + " is not configured");
}

BetaSchedule ExperimentConfig::make_schedule() const {
  BetaSchedule sched;
  for (const auto& [id, t_start] : schedule)
    sched.segments.push_back({t_start, id, regime(id).params});
  sched.validate();
  return sched;
}

void ExperimentConfig::validate() const {
  if (regimes.empty()) throw ConfigError("no regimes configured");
  for (const auto& r : regimes) {
    if (!r.params.all_finite())
      throw ConfigError("regime " + std::to_string(r.id) +
                        " has non-finite parameters");
  }
  if (n <= 0 || (n & (n - 1)) != 0)
    throw ConfigError("grid n must be a positive power of two");
  if (!(x_max > x_min)) throw ConfigError("x_max must exceed x_min");
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (!(snapshot_stride > 0)) throw ConfigError("snapshot stride must be positive");
  if (snapshot_end < snapshot_start)
    throw ConfigError("snapshot window is empty");
  if (!(energy_threshold > 0.0) || energy_threshold > 1.0)
    throw ConfigError("energy threshold must lie in (0, 1]");
  if (trials < 1) throw ConfigError("trial count must be >= 1");
  if (aggregate_window < 0) throw ConfigError("aggregate window must be >= 0");
  if (schedule.empty()) throw ConfigError("schedule has no segments");

  BetaSchedule sched = make_schedule();  // checks ordering and regime ids
  if (schedule_t_end < sched.segments.back().t_start)
    throw ConfigError("schedule t_end precedes the last segment");

  const double window = std::max(aggregate_window - 1, 0) * snapshot_stride;
  for (double t : measurement_times) {
    if (t < 0.0 || t + window > schedule_t_end)
      throw ConfigError("measurement time " + std::to_string(t) +
                        " falls outside the schedule");
    const int seg = sched.segment_at(t);
    const int seg_after = sched.segment_at(t + window);
    if (seg != seg_after)
      throw ConfigError("aggregation window crosses a segment switch at t = " +
                        std::to_string(t));
  }
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
  auto regime_eq = [](const RegimeSpec& a, const RegimeSpec& b) {
    return a.id == b.id && a.params == b.params && a.description == b.description;
  };
  if (regimes.size() != other.regimes.size()) return false;
  for (std::size_t i = 0; i < regimes.size(); ++i)
    if (!regime_eq(regimes[i], other.regimes[i])) return false;
  return n == other.n && x_min == other.x_min && x_max == other.x_max &&
         dt == other.dt && ic_amplitude == other.ic_amplitude &&
         ic_width == other.ic_width && ic_skew == other.ic_skew &&
         ic_chirp == other.ic_chirp && ic_offset == other.ic_offset &&
         snapshot_start == other.snapshot_start &&
         snapshot_end == other.snapshot_end &&
         snapshot_stride == other.snapshot_stride &&
         energy_threshold == other.energy_threshold &&
         sensors3 == other.sensors3 && sensors5 == other.sensors5 &&
         sigma == other.sigma && trials == other.trials && seed == other.seed &&
         aggregate_window == other.aggregate_window &&
         schedule == other.schedule && schedule_t_end == other.schedule_t_end &&
         measurement_times == other.measurement_times;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.regimes = {
      {1, {-0.3, -0.05, 1.45, 0.0, -0.1, -0.5}, "3-hump, localized"},
      {2, {-0.3, -0.05, 1.4, 0.0, -0.1, -0.5}, "localized, side lobes"},
      {3, {0.08, 0.0, 0.66, -0.1, -0.1, -0.1}, "breather"},
      {4, {0.125, 0.0, 1.0, -0.6, -0.1, -0.1}, "exploding soliton"},
      {5, {0.08, -0.05, 0.6, -0.1, -0.1, -0.1}, "fat soliton"},
      {6, {0.08, -0.05, 0.5, -0.1, -0.1, -0.1}, "dissipative soliton"},
  };
  cfg.schedule = {{1, 0.0}, {3, 100.0}, {5, 200.0}};
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const SectionMap sections = read_sections(path);
  ExperimentConfig cfg = default_config();
  cfg.regimes.clear();
  cfg.schedule.clear();

  const SectionView grid(sections, "grid");
  cfg.n = static_cast<int>(grid.integer("n", cfg.n));
  cfg.x_min = grid.number("x_min", cfg.x_min);
  cfg.x_max = grid.number("x_max", cfg.x_max);

  const SectionView sim(sections, "simulation");
  cfg.dt = sim.number("dt", cfg.dt);
  cfg.ic_amplitude = sim.number("ic_amplitude", cfg.ic_amplitude);
  cfg.ic_width = sim.number("ic_width", cfg.ic_width);
  cfg.ic_skew = sim.number("ic_skew", cfg.ic_skew);
  cfg.ic_chirp = sim.number("ic_chirp", cfg.ic_chirp);
  cfg.ic_offset = sim.number("ic_offset", cfg.ic_offset);
  cfg.snapshot_start = sim.number("snapshot_start", cfg.snapshot_start);
  cfg.snapshot_end = sim.number("snapshot_end", cfg.snapshot_end);
  cfg.snapshot_stride = sim.number("snapshot_stride", cfg.snapshot_stride);

  const SectionView pod(sections, "pod");
  cfg.energy_threshold = pod.number("energy_threshold", cfg.energy_threshold);

  const SectionView sensors(sections, "sensors");
  cfg.sensors3 = sensors.numbers("positions_3", cfg.sensors3);
  cfg.sensors5 = sensors.numbers("positions_5", cfg.sensors5);

  const SectionView noise(sections, "noise");
  cfg.sigma = noise.number("sigma", cfg.sigma);

  const SectionView mc(sections, "montecarlo");
  cfg.trials = static_cast<int>(mc.integer("trials", cfg.trials));
  cfg.seed = static_cast<std::uint64_t>(mc.integer("seed", static_cast<long>(cfg.seed)));
  cfg.aggregate_window =
      static_cast<int>(mc.integer("aggregate_window", cfg.aggregate_window));

  const SectionView schedule(sections, "schedule");
  cfg.schedule_t_end = schedule.number("t_end", cfg.schedule_t_end);
  cfg.measurement_times =
      schedule.numbers("measurement_times", cfg.measurement_times);
  if (const auto* segs = schedule.find("segments")) {
    for (const auto& item : split_list(*segs)) {
      const auto at = item.find('@');
      if (at == std::string::npos)
        throw ConfigError("segment '" + item + "' must look like regime@time");
      const int id =
          static_cast<int>(parse_int(item.substr(0, at), "segment regime"));
      const double t = parse_double(item.substr(at + 1), "segment start");
      cfg.schedule.emplace_back(id, t);
    }
  } else {
    cfg.schedule = default_config().schedule;
  }

  for (const auto& [name, entries] : sections) {
    if (name.rfind("regime", 0) != 0) continue;
    const std::string id_text = trim(name.substr(6));
    if (id_text.empty())
      throw ConfigError("regime section must name an id, e.g. [regime 1]");
    RegimeSpec spec;
    spec.id = static_cast<int>(parse_int(id_text, "regime section id"));
    const SectionView view(sections, name);
    spec.params.tau = view.number("tau", 0.0);
    spec.params.kappa = view.number("kappa", 0.0);
    spec.params.mu = view.number("mu", 0.0);
    spec.params.nu = view.number("nu", 0.0);
    spec.params.eps = view.number("eps", 0.0);
    spec.params.gamma = view.number("gamma", 0.0);
    spec.description = view.text("description", "");
    cfg.regimes.push_back(spec);
  }
  std::sort(cfg.regimes.begin(), cfg.regimes.end(),
            [](const RegimeSpec& a, const RegimeSpec& b) { return a.id < b.id; });
  if (cfg.regimes.empty()) cfg.regimes = default_config().regimes;

  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> read_key_values(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> flat;
  for (const auto& [section, entries] : read_sections(path)) {
    for (const auto& [key, value] : entries)
      flat[section.empty() ? key : section + "." + key] = value;
  }
  return flat;
}

void save_config(const ExperimentConfig& config,
                 const std::filesystem::path& path) {
  std::ostringstream out;
  out.precision(12);
  out << "# sparsedyn experiment configuration\n\n";
  out << "[grid]\n"
      << "n = " << config.n << "\n"
      << "x_min = " << config.x_min << "\n"
      << "x_max = " << config.x_max << "\n\n";
  out << "[simulation]\n"
      << "dt = " << config.dt << "\n"
      << "ic_amplitude = " << config.ic_amplitude << "\n"
      << "ic_width = " << config.ic_width << "\n"
      << "ic_skew = " << config.ic_skew << "\n"
      << "ic_chirp = " << config.ic_chirp << "\n"
      << "ic_offset = " << config.ic_offset << "\n"
      << "snapshot_start = " << config.snapshot_start << "\n"
      << "snapshot_end = " << config.snapshot_end << "\n"
      << "snapshot_stride = " << config.snapshot_stride << "\n\n";
  out << "[pod]\n"
      << "energy_threshold = " << config.energy_threshold << "\n\n";
  out << "[sensors]\n"
      << "positions_3 =";
  for (double x : config.sensors3) out << " " << x;
  out << "\npositions_5 =";
  for (double x : config.sensors5) out << " " << x;
  out << "\n\n[noise]\nsigma = " << config.sigma << "\n\n";
  out << "[montecarlo]\n"
      << "trials = " << config.trials << "\n"
      << "seed = " << config.seed << "\n"
      << "aggregate_window = " << config.aggregate_window << "\n\n";
  out << "[schedule]\nsegments =";
  for (const auto& [id, t] : config.schedule) out << " " << id << "@" << t;
  out << "\nt_end = " << config.schedule_t_end << "\nmeasurement_times =";
  for (double t : config.measurement_times) out << " " << t;
  out << "\n";
  for (const auto& r : config.regimes) {
    out << "\n[regime " << r.id << "]\n"
        << "tau = " << r.params.tau << "\n"
        << "kappa = " << r.params.kappa << "\n"
        << "mu = " << r.params.mu << "\n"
        << "nu = " << r.params.nu << "\n"
        << "eps = " << r.params.eps << "\n"
        << "gamma = " << r.params.gamma << "\n";
    if (!r.description.empty()) out << "description = " << r.description << "\n";
  }

  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << out.str();
  if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace sparsedyn
