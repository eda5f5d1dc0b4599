#include "rankmat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rankmat {

void TrainConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("learning_rate must be a positive real");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale))
    throw std::invalid_argument("init_scale must be a positive real");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"k", c.k},
          {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"init_scale", c.init_scale},
          {"shuffle_each_epoch", c.shuffle_each_epoch}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c) {
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") c.kind = parse_model_kind(value.get<std::string>());
    else if (key == "k") c.k = value.get<std::size_t>();
    else if (key == "learning_rate") c.learning_rate = value.get<double>();
    else if (key == "epochs") c.epochs = value.get<std::size_t>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "init_scale") c.init_scale = value.get<double>();
    else if (key == "shuffle_each_epoch") c.shuffle_each_epoch = value.get<bool>();
    else if (key != "grid")
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return c;
}

std::vector<double> default_learning_rate_grid() {
  constexpr int kPoints = 8;
  const double lo = std::log(1e-4), hi = std::log(5e-2);
  std::vector<double> grid;
  for (int p = 0; p < kPoints; ++p)
    grid.push_back(std::exp(lo + (hi - lo) * p / (kPoints - 1)));
  grid.front() = 1e-4;
  grid.back() = 5e-2;
  return grid;
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("bad value for '" + std::string(key) + "': " +
                                std::string(text));
  return out;
}

}  // namespace

std::vector<double> parse_rate_list(std::string_view text) {
  std::vector<double> rates;
  while (true) {
    const std::size_t comma = text.find(',');
    const std::string_view field = strip(text.substr(0, comma));
    const double rate = parse_value<double>("grid", field);
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("learning rates must be positive: " +
                                  std::string(field));
    rates.push_back(rate);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return rates;
}

ConfigFile parse_config(std::string_view text, TrainConfig defaults) {
  ConfigFile file{defaults, std::nullopt};
  if (strip(text).starts_with('{')) {
    const auto j = nlohmann::json::parse(text);
    file.train = train_config_from_json(j, defaults);
    if (j.contains("grid")) {
      file.grid = j.at("grid").get<std::vector<double>>();
      for (double r : *file.grid)
        if (!(r > 0.0)) throw std::invalid_argument("grid rates must be positive");
    }
    return file;
  }

  nlohmann::json as_json = nlohmann::json::object();
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key(strip(line.substr(0, eq)));
    const std::string_view value = strip(line.substr(eq + 1));
    if (key == "kind") as_json[key] = std::string(value);
    else if (key == "k" || key == "epochs") as_json[key] = parse_value<std::size_t>(key, value);
    else if (key == "seed") as_json[key] = parse_value<std::uint64_t>(key, value);
    else if (key == "learning_rate" || key == "init_scale")
      as_json[key] = parse_value<double>(key, value);
    else if (key == "shuffle_each_epoch") {
      if (value != "true" && value != "false")
        throw std::invalid_argument("shuffle_each_epoch must be true or false");
      as_json[key] = value == "true";
    } else if (key == "grid") file.grid = parse_rate_list(value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  file.train = train_config_from_json(as_json, defaults);
  return file;
}

ConfigFile load_config(const std::filesystem::path& path, TrainConfig defaults) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), defaults);
}

}  // namespace rankmat
