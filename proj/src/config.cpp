#include "clms/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "clms/csv.hpp"
#include "clms/errors.hpp"

namespace clms {

namespace {

std::string trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = value.find(',', start);
    out.push_back(trim(std::string_view(value).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ConfigError(origin + ": " + what);
}

double parse_double(const std::string& text, const std::string& origin) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) fail(origin, "cannot parse number '" + text + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& text, const std::string& origin) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) fail(origin, "cannot parse integer '" + text + "'");
  return v;
}

StepSize parse_step(const std::string& text, const std::string& origin) {
  std::string compact;
  std::ranges::copy_if(text, std::back_inserter(compact), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
  constexpr std::string_view suffix = "*mu_max";
  if (compact == "mu_max") return {1.0, true};
  if (compact.size() > suffix.size() && compact.ends_with(suffix)) {
    return {parse_double(compact.substr(0, compact.size() - suffix.size()), origin), true};
  }
  return {parse_double(compact, origin), false};
}

std::vector<double> parse_numbers(const std::string& value, const std::string& origin) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(item, origin));
  return out;
}

ExplicitScenario& explicit_scenario(ExperimentConfig& cfg) {
  if (!cfg.scenario) cfg.scenario.emplace();
  return *cfg.scenario;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void apply(ExperimentConfig& cfg, const std::string& key, const std::string& value,
           const std::string& origin) {
  if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(value, origin);
  } else if (key == "mc_seed") {
    cfg.mc_seed = parse_int<std::uint64_t>(value, origin);
  } else if (key == "L") {
    cfg.L = parse_int<int>(value, origin);
  } else if (key == "K") {
    cfg.K = parse_int<int>(value, origin);
  } else if (key == "eta") {
    cfg.eta = parse_numbers(value, origin);
  } else if (key == "mu") {
    std::vector<StepSize> steps;
    for (const auto& item : split_list(value)) steps.push_back(parse_step(item, origin));
    cfg.mu = std::move(steps);
  } else if (key == "runs") {
    cfg.runs = parse_int<std::size_t>(value, origin);
  } else if (key == "iters") {
    if (value == "auto") {
      cfg.iters.reset();
    } else {
      cfg.iters = parse_int<std::size_t>(value, origin);
    }
  } else if (key == "ss_window") {
    cfg.ss_window = parse_int<std::size_t>(value, origin);
  } else if (key == "output_dir") {
    if (value.empty()) fail(origin, "output_dir is empty");
    cfg.output_dir = value;
  } else if (key == "threads") {
    cfg.threads = parse_int<unsigned>(value, origin);
  } else if (key == "init") {
    if (value == "q") {
      cfg.init = InitialWeights::min_norm;
    } else if (value == "g") {
      cfg.init = InitialWeights::optimum;
    } else {
      fail(origin, "init must be 'q' or 'g', got '" + value + "'");
    }
  } else if (key == "h") {
    explicit_scenario(cfg).h = to_vector(parse_numbers(value, origin));
  } else if (key == "f") {
    explicit_scenario(cfg).f = to_vector(parse_numbers(value, origin));
  } else if (key == "R") {
    const auto v = parse_numbers(value, origin);
    explicit_scenario(cfg).R = to_vector(v);  // reshaped once L is known
  } else if (key == "C") {
    const auto v = parse_numbers(value, origin);
    explicit_scenario(cfg).C = to_vector(v);
  } else {
    fail(origin, "unknown key '" + key + "'");
  }
}

void check(ExperimentConfig& cfg, const std::string& source) {
  auto bad = [&](const std::string& what) { fail(source, what); };
  if (cfg.L < 2) bad("L must be at least 2");
  if (cfg.K < 1) bad("K must be at least 1");
  if (cfg.K >= cfg.L) bad("invariant K < L violated (K=" + std::to_string(cfg.K) + ", L=" + std::to_string(cfg.L) + ")");
  if (cfg.runs < 1) bad("runs must be at least 1");
  if (cfg.eta) {
    if (cfg.eta->empty()) bad("eta list is empty");
    for (double e : *cfg.eta)
      if (!(e >= 0.0) || !std::isfinite(e)) bad("eta values must be finite and >= 0");
  }
  if (cfg.mu) {
    for (const auto& m : *cfg.mu)
      if (!(m.value > 0.0) || !std::isfinite(m.value)) bad("mu values must be finite and > 0");
  }
  if (cfg.scenario) {
    auto& s = *cfg.scenario;
    const auto L = cfg.L;
    const auto K = cfg.K;
    if (s.h.size() != L) bad("h needs L=" + std::to_string(L) + " values");
    if (s.f.size() != K) bad("f needs K=" + std::to_string(K) + " values");
    if (s.R.size() != L * L) bad("R needs L*L values (column-major)");
    if (s.C.size() != L * K) bad("C needs L*K values (column-major)");
    s.R = unvec(vec_of(s.R), L, L);
    s.C = unvec(vec_of(s.C), L, K);
  }
}

}  // namespace

std::string StepSize::text() const {
  return relative ? format_number(value) + "*mu_max" : format_number(value);
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const ConfigOverrides& overrides) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string origin = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(origin, "expected 'key = value'");
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) fail(origin, "missing key");
    apply(cfg, key, value, origin);
  }
  for (const auto& [key, value] : overrides) {
    apply(cfg, key, trim(value), "--" + key);
  }
  check(cfg, source);
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   const ConfigOverrides& overrides) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), path.string(), overrides);
}

std::string spec_to_config(const SystemSpec& spec) {
  auto join = [](const auto& values) {
    std::string out;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (i) out += ", ";
      out += format_number(values(i));
    }
    return out;
  };
  std::ostringstream os;
  os << "L = " << spec.L << '\n'
     << "K = " << spec.K << '\n'
     << "eta = " << format_number(spec.eta) << '\n'
     << "h = " << join(spec.h) << '\n'
     << "R = " << join(vec_of(spec.R)) << '\n'
     << "C = " << join(vec_of(spec.C)) << '\n'
     << "f = " << join(spec.f) << '\n';
  return os.str();
}

SystemSpec scenario_from_config(const ExperimentConfig& config, double eta) {
  if (!config.scenario) return random_scenario(config.seed, config.L, config.K, eta);
  SystemSpec s;
  s.L = config.L;
  s.K = config.K;
  s.h = config.scenario->h;
  s.R = config.scenario->R;
  s.C = config.scenario->C;
  s.f = config.scenario->f;
  s.eta = eta;
  return s;
}

}  // namespace clms
