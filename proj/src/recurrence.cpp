#include "mixrabi/recurrence.hpp"

namespace mixrabi {

std::string to_string(const Seed& s) {
  switch (s.kind) {
    case SeedKind::F0: return "F0";
    case SeedKind::F1: return "F1";
    case SeedKind::EM: return "EM(" + std::to_string(s.m) + ")";
  }
  return "?";
}

}  // namespace mixrabi
