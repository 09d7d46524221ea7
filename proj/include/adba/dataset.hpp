#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "adba/oracle.hpp"

namespace adba {

class MalformedDataset : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabeledImage {
  ImageVector image;
  Label label;
};

struct Dataset {
  std::size_t dimension = 0;
  std::uint32_t class_count = 0;
  std::vector<LabeledImage> records;
};

/// Container layout: "ADBDATA 1 <count> <N> <K>\n", then per record
/// "IMG <label>\n" followed by 4N bytes of little-endian float32 pixels.
Dataset read_dataset(std::istream& in);
Dataset load_images(const std::filesystem::path& path);

/// As load_images, additionally requiring the container's N to equal
/// expected_dimension.
Dataset load_images(const std::filesystem::path& path, std::size_t expected_dimension);

void write_dataset(std::ostream& out, const Dataset& dataset);
void save_images(const std::filesystem::path& path, const Dataset& dataset);

}  // namespace adba
