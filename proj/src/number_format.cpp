#include "rebus/number_format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rebus {

namespace {

std::string with_point(std::string s) {
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string format_exact(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return with_point(std::string(buf.data(), end));
}

std::string format_short(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 6);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return with_point(std::string(buf.data(), end));
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

}  // namespace rebus
