#pragma once

// Event records, stream container, file formats and temporal scaling.
//
// CSV:    header `x,y,t[,label]`, decimal timestamps, label 1=real 0=noise.
// Binary: "EVD1", u32 count, u16 width, u16 height, then per event
//         u16 x, u16 y, f64 t, u8 label (255 = unknown); all little-endian.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace evgraph {

enum class Label : std::uint8_t { Noise = 0, Real = 1, Unknown = 255 };

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  double t = 0.0;  // seconds
  Label label = Label::Unknown;

  friend bool operator==(const Event&, const Event&) = default;
};

// Events ordered by timestamp (stable with respect to construction order).
class EventStream {
 public:
  EventStream() = default;

  // Sorts stably by t. A zero width/height is inferred as max coordinate + 1.
  // Throws InvalidInput on non-finite or negative timestamps and on
  // coordinates outside declared sensor bounds.
  EventStream(std::vector<Event> events, std::uint32_t width, std::uint32_t height);

  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }

  bool has_labels() const noexcept;

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  std::vector<Event> events_;
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
};

enum class FileFormat { Csv, Binary };
enum class TimeUnit { Seconds, Milliseconds, Microseconds };

FileFormat format_from_path(const std::filesystem::path& path);

// `unit` applies to CSV timestamps only; binary files always hold seconds.
EventStream load_events(const std::filesystem::path& path, FileFormat format,
                        TimeUnit unit = TimeUnit::Seconds);
void save_events(const EventStream& stream, const std::filesystem::path& path, FileFormat format);

// N x 3 row-major coordinates (x, y, beta * t).
class ScaledEvents {
 public:
  ScaledEvents() = default;
  ScaledEvents(std::vector<double> coords, double beta);

  static ScaledEvents from_points(std::span<const std::array<double, 3>> points,
                                  double beta = 1.0);

  std::size_t size() const noexcept { return coords_.size() / 3; }
  double beta() const noexcept { return beta_; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::array<double, 3> row(std::size_t i) const {
    return {coords_[3 * i], coords_[3 * i + 1], coords_[3 * i + 2]};
  }
  double operator()(std::size_t i, std::size_t c) const { return coords_[3 * i + c]; }

  friend bool operator==(const ScaledEvents&, const ScaledEvents&) = default;

 private:
  std::vector<double> coords_;
  double beta_ = 1.0;
};

ScaledEvents scale_time(const EventStream& stream, double beta);
// Rescales the time column of already-scaled coordinates; the result carries
// the accumulated factor.
ScaledEvents scale_time(const ScaledEvents& scaled, double beta);

// Squared Euclidean distance between rows i and j, computed in the same
// operation order as the distance kernels.
inline double squared_distance(const ScaledEvents& pts, std::size_t i, std::size_t j) {
  const double dx = pts(j, 0) - pts(i, 0);
  const double dy = pts(j, 1) - pts(i, 1);
  const double dz = pts(j, 2) - pts(i, 2);
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace evgraph
