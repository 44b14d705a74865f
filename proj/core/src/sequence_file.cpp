#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "polarmwd/construction.hpp"
#include "polarmwd/errors.hpp"

namespace polarmwd {

namespace {

std::string_view strip(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = line.find_last_not_of(" \t\r\n");
  return line.substr(first, last - first + 1);
}

bool parse_unsigned(std::string_view text, std::size_t& value) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

ReliabilitySequence parse_sequence(std::istream& in, std::optional<std::size_t> expected_length) {
  std::string raw;
  std::size_t line_number = 0;
  std::optional<std::size_t> length;
  std::vector<ChannelIndex> order;

  auto fail = [&](const std::string& what) {
    throw ParseError("sequence line " + std::to_string(line_number) + ": " + what);
  };

  while (std::getline(in, raw)) {
    ++line_number;
    const std::string_view line = strip(raw);
    if (line.empty()) continue;
    if (!length) {
      std::size_t value = 0;
      if (!line.starts_with("N=") || !parse_unsigned(line.substr(2), value)) fail("expected header N=<int>");
      try {
        (void)CodeParams::from_length(value);
      } catch (const InvalidArgument& e) {
        fail(e.what());
      }
      if (expected_length && value != *expected_length) {
        fail("length mismatch: file has N=" + std::to_string(value) + ", expected N=" +
             std::to_string(*expected_length));
      }
      length = value;
      order.reserve(value);
      continue;
    }
    std::size_t index = 0;
    if (!parse_unsigned(line, index)) fail("expected a decimal channel index");
    if (order.size() == *length) fail("more than N=" + std::to_string(*length) + " entries");
    if (index >= *length) fail("index " + std::to_string(index) + " out of range");
    order.push_back(static_cast<ChannelIndex>(index));
  }

  if (!length) throw ParseError("sequence: missing header N=<int>");
  if (order.size() != *length) {
    throw ParseError("sequence: expected " + std::to_string(*length) + " entries, found " +
                     std::to_string(order.size()));
  }
  try {
    return ReliabilitySequence(std::move(order));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("sequence: ") + e.what());
  }
}

void write_sequence(std::ostream& out, const ReliabilitySequence& sequence) {
  out << "N=" << sequence.length() << '\n';
  for (ChannelIndex index : sequence.order()) out << index << '\n';
}

ReliabilitySequence load_sequence_file(const std::filesystem::path& path,
                                       std::optional<std::size_t> expected_length) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sequence file " + path.string());
  return parse_sequence(in, expected_length);
}

void save_sequence_file(const ReliabilitySequence& sequence, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write sequence file " + path.string());
  write_sequence(out, sequence);
  out.flush();
  if (!out) throw IoError("write failed for sequence file " + path.string());
}

}  // namespace polarmwd
