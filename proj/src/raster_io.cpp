#include "sarsim/raster_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "sarsim/errors.hpp"

namespace sarsim {
namespace {

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) | (v >> 24);
  }
  return v;
}

std::filesystem::path sidecar_path(const std::filesystem::path& raster) {
  return std::filesystem::path(raster.string() + ".json");
}

}  // namespace

void write_raster(const std::filesystem::path& path, const IntensityImage& image) {
  // Convert first so an unrepresentable image leaves no partial file behind.
  std::vector<char> buffer(image.pixels.size() * 4);
  for (std::size_t n = 0; n < image.pixels.size(); ++n) {
    const float v = static_cast<float>(image.pixels[n]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << path.string() << ": pixel " << n << " (" << image.pixels[n]
          << ") is not representable as float32";
      throw NumericalError(msg.str());
    }
    const auto word = to_little_endian(std::bit_cast<std::uint32_t>(v));
    std::memcpy(buffer.data() + 4 * n, &word, 4);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  std::ostringstream header;
  header << std::setprecision(17) << kRasterMagic << '\n'
         << "width " << image.width() << '\n'
         << "height " << image.height() << '\n'
         << "dx " << image.dx << '\n'
         << "dy " << image.dy << '\n'
         << "end\n";
  out << header.str();
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw ConfigError("failed writing " + path.string());
}

IntensityImage read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRasterMagic) {
    throw StructuralError(path.string() + ": not a SARSIM raster");
  }
  std::size_t width = 0, height = 0;
  double dx = 0.0, dy = 0.0;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "width") fields >> width;
    else if (key == "height") fields >> height;
    else if (key == "dx") fields >> dx;
    else if (key == "dy") fields >> dy;
    else throw StructuralError(path.string() + ": unknown header field '" + key + "'");
    if (fields.fail()) throw StructuralError(path.string() + ": bad value for '" + key + "'");
  }
  if (!ended || width == 0 || height == 0 || !(dx > 0.0) || !(dy > 0.0)) {
    throw StructuralError(path.string() + ": incomplete header");
  }
  IntensityImage image;
  image.pixels = Grid(width, height);
  image.dx = dx;
  image.dy = dy;
  std::vector<char> buffer(width * height * 4);
  in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (in.gcount() != static_cast<std::streamsize>(buffer.size())) {
    throw StructuralError(path.string() + ": truncated pixel data");
  }
  for (std::size_t n = 0; n < width * height; ++n) {
    std::uint32_t word;
    std::memcpy(&word, buffer.data() + 4 * n, 4);
    image.pixels[n] = static_cast<double>(std::bit_cast<float>(to_little_endian(word)));
  }
  read_metadata_sidecar(path, image);
  return image;
}

void write_pgm(const std::filesystem::path& path, const IntensityImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  const auto values = image.pixels.values();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = values.empty() ? 0.0 : *lo_it;
  const double span = values.empty() ? 0.0 : *hi_it - lo;
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<unsigned char> bytes(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double t = span > 0.0 ? (values[n] - lo) / span : 0.0;
    bytes[n] = static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_metadata_sidecar(const std::filesystem::path& raster_path, const IntensityImage& image,
                            const std::string& extra_json) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(extra_json);
  nlohmann::ordered_json md = nlohmann::ordered_json::object();
  for (const auto& [k, v] : image.metadata) md[k] = v;
  doc["metadata"] = md;
  doc["width"] = image.width();
  doc["height"] = image.height();
  doc["dx"] = image.dx;
  doc["dy"] = image.dy;
  std::ofstream out(sidecar_path(raster_path));
  if (!out) throw ConfigError("cannot write sidecar for " + raster_path.string());
  out << doc.dump(2) << '\n';
}

void read_metadata_sidecar(const std::filesystem::path& raster_path, IntensityImage& image) {
  std::ifstream in(sidecar_path(raster_path));
  if (!in) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(raster_path.string() + ".json: " + e.what());
  }
  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    for (const auto& [k, v] : doc["metadata"].items()) {
      image.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
}

}  // namespace sarsim
