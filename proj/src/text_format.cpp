#include "coopcsma/text_format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace coopcsma {

std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{})
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, end);
}

double parse_double(std::string_view text, std::string_view what)
{
  text = trim(text);
  if (text == "inf" || text == "+inf")
    return INFINITY;
  if (text == "-inf")
    return -INFINITY;
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
    throw std::invalid_argument(std::string(what) + ": not a number: '" + std::string(text) + "'");
  return value;
}

long long parse_integer(std::string_view text, std::string_view what)
{
  text = trim(text);
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  long long value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
    throw std::invalid_argument(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return value;
}

std::string_view trim(std::string_view text)
{
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos)
    return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char delimiter)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(text.substr(start)));
      break;
    }
    parts.push_back(trim(text.substr(start, pos - start)));
    start = pos + 1;
  }
  return parts;
}

} // namespace coopcsma
