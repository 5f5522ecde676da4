#include "evgraph/event_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "evgraph/error.hpp"

namespace evgraph {

EventStream::EventStream(std::vector<Event> events, std::uint32_t width, std::uint32_t height)
    : events_(std::move(events)), width_(width), height_(height) {
  std::uint32_t max_x = 0;
  std::uint32_t max_y = 0;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    if (!std::isfinite(e.t) || e.t < 0.0) {
      fail(ErrorKind::InvalidInput,
           "event " + std::to_string(i) + " has invalid timestamp " + std::to_string(e.t));
    }
    max_x = std::max<std::uint32_t>(max_x, e.x);
    max_y = std::max<std::uint32_t>(max_y, e.y);
  }
  if (width_ == 0) width_ = events_.empty() ? 0 : max_x + 1;
  if (height_ == 0) height_ = events_.empty() ? 0 : max_y + 1;
  if (!events_.empty() && (max_x >= width_ || max_y >= height_)) {
    fail(ErrorKind::InvalidInput, "event coordinates exceed the declared sensor size " +
                                      std::to_string(width_) + "x" + std::to_string(height_));
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  if (!events_.empty()) {
    t_min_ = events_.front().t;
    t_max_ = events_.back().t;
  }
}

bool EventStream::has_labels() const noexcept {
  return !events_.empty() && std::none_of(events_.begin(), events_.end(), [](const Event& e) {
    return e.label == Label::Unknown;
  });
}

FileFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".txt") return FileFormat::Csv;
  return FileFormat::Binary;
}

namespace {

constexpr char kMagic[4] = {'E', 'V', 'D', '1'};
constexpr std::uint8_t kUnknownByte = 255;

double unit_to_seconds(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Seconds:
      return 1.0;
    case TimeUnit::Milliseconds:
      return 1e-3;
    case TimeUnit::Microseconds:
      return 1e-6;
  }
  return 1.0;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos
                                                                                 : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line_no,
                              const std::string& msg) {
  fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view s, const std::filesystem::path& path, std::size_t line_no,
               const char* what) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    parse_error(path, line_no, std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

EventStream load_csv(const std::filesystem::path& path, TimeUnit unit) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  bool has_label = false;
  bool header_seen = false;
  std::vector<Event> events;
  const double to_seconds = unit_to_seconds(unit);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() >= 3 && fields[0] == "x" && fields[1] == "y" && fields[2] == "t" &&
          (fields.size() == 3 || (fields.size() == 4 && fields[3] == "label"))) {
        has_label = fields.size() == 4;
        continue;
      }
      parse_error(path, line_no, "expected header 'x,y,t[,label]'");
    }
    if (fields.size() != (has_label ? 4u : 3u)) {
      parse_error(path, line_no,
                  "expected " + std::to_string(has_label ? 4 : 3) + " fields, got " +
                      std::to_string(fields.size()));
    }
    Event e;
    e.x = parse_number<std::uint16_t>(fields[0], path, line_no, "x");
    e.y = parse_number<std::uint16_t>(fields[1], path, line_no, "y");
    e.t = parse_number<double>(fields[2], path, line_no, "t") * to_seconds;
    if (!std::isfinite(e.t) || e.t < 0.0) parse_error(path, line_no, "timestamp must be >= 0");
    if (has_label) {
      const int lab = parse_number<int>(fields[3], path, line_no, "label");
      if (lab != 0 && lab != 1) parse_error(path, line_no, "label must be 0 or 1");
      e.label = lab == 1 ? Label::Real : Label::Noise;
    }
    events.push_back(e);
  }
  if (!header_seen) parse_error(path, 1, "missing header");
  return EventStream(std::move(events), 0, 0);
}

void save_csv(const EventStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  // A label column is written only when every event carries a ground truth.
  const bool with_label = stream.has_labels();
  out << (with_label ? "x,y,t,label\n" : "x,y,t\n");
  char buf[64];
  for (const Event& e : stream.events()) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), e.t);
    out << e.x << ',' << e.y << ',' << std::string_view(buf, res.ptr - buf);
    if (with_label) out << ',' << (e.label == Label::Real ? 1 : 0);
    out << '\n';
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

template <typename T>
void put_le(std::string& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

void save_binary(const EventStream& stream, const std::filesystem::path& path) {
  if (stream.width() > 0xFFFF || stream.height() > 0xFFFF) {
    fail(ErrorKind::InvalidInput, "sensor size does not fit the binary format");
  }
  std::string buf;
  buf.reserve(12 + 13 * stream.size());
  buf.append(kMagic, 4);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(stream.size()));
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.width()));
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.height()));
  for (const Event& e : stream.events()) {
    put_le<std::uint16_t>(buf, e.x);
    put_le<std::uint16_t>(buf, e.y);
    std::uint64_t bits = 0;
    std::memcpy(&bits, &e.t, sizeof(bits));
    put_le<std::uint64_t>(buf, bits);
    buf.push_back(static_cast<char>(e.label == Label::Unknown ? kUnknownByte
                                                              : static_cast<std::uint8_t>(e.label)));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

EventStream load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  if (data.size() < 12 || std::memcmp(p, kMagic, 4) != 0) {
    fail(ErrorKind::Parse, path.string() + ": missing EVD1 header");
  }
  const auto count = get_le<std::uint32_t>(p + 4);
  const auto width = get_le<std::uint16_t>(p + 8);
  const auto height = get_le<std::uint16_t>(p + 10);
  if (data.size() != 12 + 13 * static_cast<std::size_t>(count)) {
    fail(ErrorKind::Parse, path.string() + ": expected " + std::to_string(count) +
                               " records, file size " + std::to_string(data.size()));
  }
  std::vector<Event> events(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* r = p + 12 + 13 * i;
    Event& e = events[i];
    e.x = get_le<std::uint16_t>(r);
    e.y = get_le<std::uint16_t>(r + 2);
    const auto bits = get_le<std::uint64_t>(r + 4);
    std::memcpy(&e.t, &bits, sizeof(bits));
    const std::uint8_t lab = r[12];
    if (lab == kUnknownByte) {
      e.label = Label::Unknown;
    } else if (lab <= 1) {
      e.label = static_cast<Label>(lab);
    } else {
      fail(ErrorKind::Parse, path.string() + ": record " + std::to_string(i) +
                                 " has invalid label byte " + std::to_string(lab));
    }
  }
  return EventStream(std::move(events), width, height);
}

}  // namespace

EventStream load_events(const std::filesystem::path& path, FileFormat format, TimeUnit unit) {
  if (!std::filesystem::exists(path)) fail(ErrorKind::Io, "no such file: " + path.string());
  return format == FileFormat::Csv ? load_csv(path, unit) : load_binary(path);
}

void save_events(const EventStream& stream, const std::filesystem::path& path, FileFormat format) {
  if (format == FileFormat::Csv) {
    save_csv(stream, path);
  } else {
    save_binary(stream, path);
  }
}

ScaledEvents::ScaledEvents(std::vector<double> coords, double beta)
    : coords_(std::move(coords)), beta_(beta) {
  if (coords_.size() % 3 != 0) fail(ErrorKind::InvalidInput, "coordinate buffer is not N x 3");
}

ScaledEvents ScaledEvents::from_points(std::span<const std::array<double, 3>> points,
                                       double beta) {
  std::vector<double> c;
  c.reserve(points.size() * 3);
  for (const auto& p : points) c.insert(c.end(), p.begin(), p.end());
  return ScaledEvents(std::move(c), beta);
}

ScaledEvents scale_time(const EventStream& stream, double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::InvalidParameter, "beta must be positive");
  std::vector<double> c;
  c.reserve(stream.size() * 3);
  for (const Event& e : stream.events()) {
    c.push_back(static_cast<double>(e.x));
    c.push_back(static_cast<double>(e.y));
    c.push_back(beta * e.t);
  }
  return ScaledEvents(std::move(c), beta);
}

ScaledEvents scale_time(const ScaledEvents& scaled, double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::InvalidParameter, "beta must be positive");
  std::vector<double> c(scaled.coords().begin(), scaled.coords().end());
  for (std::size_t i = 2; i < c.size(); i += 3) c[i] *= beta;
  return ScaledEvents(std::move(c), scaled.beta() * beta);
}

}  // namespace evgraph
