#include "mixrabi/common.hpp"

#include <algorithm>

namespace mixrabi {

Family parse_family(std::string_view s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  throw InvalidParameter("unknown pole family '" + std::string(s) + "' (expected A or B)");
}

std::mutex& Warnings::mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::string>& Warnings::store() {
  static std::vector<std::string> v;
  return v;
}

void Warnings::add(std::string msg) {
  std::scoped_lock lock(mutex());
  auto& v = store();
  // identical warnings from a grid sweep are reported once
  if (std::find(v.begin(), v.end(), msg) == v.end()) v.push_back(std::move(msg));
}

std::vector<std::string> Warnings::drain() {
  std::scoped_lock lock(mutex());
  std::vector<std::string> out;
  out.swap(store());
  return out;
}

std::vector<std::string> Warnings::snapshot() {
  std::scoped_lock lock(mutex());
  return store();
}

}  // namespace mixrabi
