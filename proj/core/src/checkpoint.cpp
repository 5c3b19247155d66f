#include "gridrisk/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gridrisk {

namespace {

constexpr char kMagic[4] = {'G', 'R', 'S', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t value) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) value |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

double get_f64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_params(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path.string() + "'");
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  const std::string descriptor = params.arch.descriptor();
  put_u32(out, static_cast<std::uint32_t>(descriptor.size()));
  out.write(descriptor.data(), static_cast<std::streamsize>(descriptor.size()));
  params.p.for_each_layer([&](const LinearLayer& l) {
    for (const double v : l.w) put_f64(out, v);
    for (const double v : l.b) put_f64(out, v);
  });
  if (!out) throw DataError("failed writing checkpoint '" + path.string() + "'");
}

ModelParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path.string() + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("'" + path.string() + "' is not a checkpoint file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t descriptor_len = get_u32(in);
  std::string descriptor(descriptor_len, '\0');
  in.read(descriptor.data(), descriptor_len);
  if (!in) throw DataError("truncated checkpoint '" + path.string() + "'");

  ModelParams params = init_params(ArchConfig::from_descriptor(descriptor), 0);
  params.p.for_each_layer([&](LinearLayer& l) {
    for (double& v : l.w) v = get_f64(in);
    for (double& v : l.b) v = get_f64(in);
  });
  if (!in) throw DataError("truncated checkpoint '" + path.string() + "'");
  in.peek();
  if (!in.eof()) throw DataError("trailing bytes in checkpoint '" + path.string() + "'");
  return params;
}

namespace {

using nlohmann::json;

json mask_to_json(const FeatureMask& mask) {
  return json{{"weather", mask.weather},     {"distance", mask.distance},
              {"totals", mask.totals},       {"income", mask.income},
              {"year_built", mask.year_built}, {"power_infra", mask.power_infra}};
}

FeatureMask mask_from_json(const json& j) {
  FeatureMask mask;
  mask.weather = j.at("weather").get<bool>();
  mask.distance = j.at("distance").get<bool>();
  mask.totals = j.at("totals").get<bool>();
  mask.income = j.at("income").get<bool>();
  mask.year_built = j.at("year_built").get<bool>();
  mask.power_infra = j.at("power_infra").get<bool>();
  return mask;
}

json config_to_json(const RunConfig& c) {
  return json{{"arch", to_string(c.arch)},
              {"loss", c.loss.name()},
              {"w", c.loss.w},
              {"beta", c.loss.beta},
              {"mask", mask_to_json(c.mask)},
              {"seed", c.seed},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"learning_rate", c.learning_rate},
              {"optimizer", to_string(c.optimizer)},
              {"adam_beta1", c.adam_beta1},
              {"adam_beta2", c.adam_beta2},
              {"adam_eps", c.adam_eps},
              {"sgd_momentum", c.sgd_momentum},
              {"n_runs", c.n_runs},
              {"hidden", c.hidden},
              {"branch_base", c.branch_base},
              {"branch_cond", c.branch_cond},
              {"output_head", c.output_head},
              {"grad_clip_norm", c.grad_clip_norm},
              {"augment", c.augment}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.arch = arch_kind_from_string(j.at("arch").get<std::string>());
  const auto loss_name = j.at("loss").get<std::string>();
  c.loss.type = loss_name == "exp" ? LossKind::Type::exponential
                                   : LossKind::Type::weighted_cross_entropy;
  c.loss.w = j.at("w").get<double>();
  c.loss.beta = j.at("beta").get<double>();
  c.mask = mask_from_json(j.at("mask"));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_eps = j.at("adam_eps").get<double>();
  c.sgd_momentum = j.at("sgd_momentum").get<double>();
  c.n_runs = j.at("n_runs").get<int>();
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.branch_base = j.at("branch_base").get<std::vector<int>>();
  c.branch_cond = j.at("branch_cond").get<std::vector<int>>();
  c.output_head = j.at("output_head").get<std::vector<int>>();
  c.grad_clip_norm = j.at("grad_clip_norm").get<double>();
  c.augment = j.at("augment").get<bool>();
  return c;
}

}  // namespace

std::filesystem::path meta_path_for(const std::filesystem::path& checkpoint_path) {
  std::filesystem::path p = checkpoint_path;
  p += ".meta.json";
  return p;
}

void save_meta(const std::filesystem::path& path, const ModelMeta& meta) {
  json j;
  j["config"] = config_to_json(meta.config);
  j["schema"] = {{"names", meta.schema.names}, {"interpolated", meta.schema.interpolated}};
  json stations = json::array();
  for (const auto& st : meta.stations) {
    stations.push_back({{"id", st.station_id}, {"lat", st.lat}, {"lon", st.lon}});
  }
  j["stations"] = stations;
  j["stats"] = {{"mean", meta.stats.mean}, {"stddev", meta.stats.stddev}};
  j["income_bins"] = meta.k_income;
  j["year_built_bins"] = meta.k_year;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

ModelMeta load_meta(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed metadata '" + path.string() + "': " + e.what());
  }
  try {
    ModelMeta meta;
    meta.config = config_from_json(j.at("config"));
    const auto names = j.at("schema").at("names").get<std::vector<std::string>>();
    const auto interp = j.at("schema").at("interpolated").get<std::vector<bool>>();
    if (names.size() != kNumWeatherChannels || interp.size() != kNumWeatherChannels) {
      throw DataError("metadata schema must have exactly 10 channels");
    }
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      meta.schema.names[static_cast<std::size_t>(c)] = names[static_cast<std::size_t>(c)];
      meta.schema.interpolated[static_cast<std::size_t>(c)] = interp[static_cast<std::size_t>(c)];
    }
    for (const auto& st : j.at("stations")) {
      meta.stations.push_back(StationLocation{st.at("id").get<std::string>(),
                                              st.at("lat").get<double>(),
                                              st.at("lon").get<double>()});
    }
    const auto mean = j.at("stats").at("mean").get<std::vector<double>>();
    const auto stddev = j.at("stats").at("stddev").get<std::vector<double>>();
    if (mean.size() != kNumWeatherChannels || stddev.size() != kNumWeatherChannels) {
      throw DataError("metadata stats must have exactly 10 channels");
    }
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      meta.stats.mean[static_cast<std::size_t>(c)] = mean[static_cast<std::size_t>(c)];
      meta.stats.stddev[static_cast<std::size_t>(c)] = stddev[static_cast<std::size_t>(c)];
    }
    meta.k_income = j.at("income_bins").get<std::size_t>();
    meta.k_year = j.at("year_built_bins").get<std::size_t>();
    return meta;
  } catch (const json::exception& e) {
    throw DataError("malformed metadata '" + path.string() + "': " + e.what());
  }
}

}  // namespace gridrisk
