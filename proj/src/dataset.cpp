#include "adba/dataset.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "adba/remote.hpp"

namespace adba {

namespace {

std::string read_header_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw MalformedDataset(std::string("unexpected end of file reading ") + what);
  }
  return line;
}

}  // namespace

Dataset read_dataset(std::istream& in) {
  // A zero-byte container is an empty dataset.
  if (in.peek() == std::char_traits<char>::eof()) return {};
  std::istringstream header(read_header_line(in, "header"));
  std::string magic;
  int version = 0;
  std::size_t count = 0;
  Dataset ds;
  if (!(header >> magic >> version >> count >> ds.dimension >> ds.class_count) ||
      magic != "ADBDATA" || version != 1) {
    throw MalformedDataset("bad dataset header");
  }
  if (ds.dimension == 0) throw MalformedDataset("dataset dimension must be positive");
  if (ds.class_count < 2) throw MalformedDataset("dataset needs at least two classes");

  ds.records.reserve(count);
  std::string payload(4 * ds.dimension, '\0');
  for (std::size_t i = 0; i < count; ++i) {
    std::istringstream record(read_header_line(in, "record header"));
    std::string tag;
    long long label = -1;
    if (!(record >> tag >> label) || tag != "IMG") {
      throw MalformedDataset("bad record header at record " + std::to_string(i));
    }
    if (label < 0 || label >= static_cast<long long>(ds.class_count)) {
      throw MalformedDataset("label " + std::to_string(label) + " out of range at record " +
                             std::to_string(i));
    }
    if (!in.read(payload.data(), static_cast<std::streamsize>(payload.size()))) {
      throw MalformedDataset("truncated pixels at record " + std::to_string(i));
    }
    std::vector<double> pixels = wire::decode_pixels(payload);
    for (double v : pixels) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw MalformedDataset("pixel " + std::to_string(v) + " outside [0, 1] at record " +
                               std::to_string(i));
      }
    }
    ds.records.push_back({ImageVector(std::move(pixels)), Label{static_cast<std::uint32_t>(label)}});
  }
  return ds;
}

Dataset load_images(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  return read_dataset(in);
}

Dataset load_images(const std::filesystem::path& path, std::size_t expected_dimension) {
  Dataset ds = load_images(path);
  if (ds.records.empty() && ds.dimension == 0) ds.dimension = expected_dimension;
  if (ds.dimension != expected_dimension) throw DimensionMismatch(expected_dimension, ds.dimension);
  return ds;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "ADBDATA 1 " << dataset.records.size() << ' ' << dataset.dimension << ' '
      << dataset.class_count << '\n';
  for (const auto& rec : dataset.records) {
    if (rec.image.size() != dataset.dimension) {
      throw DimensionMismatch(dataset.dimension, rec.image.size());
    }
    out << "IMG " << rec.label.class_id << '\n';
    out << wire::encode_pixels(rec.image.values());
  }
}

void save_images(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset " + path.string());
  write_dataset(out, dataset);
  if (!out) throw std::runtime_error("failed writing dataset " + path.string());
}

}  // namespace adba
