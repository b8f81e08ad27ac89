#include "mixrabi/precision.hpp"

namespace mixrabi {

namespace {
std::recursive_mutex& mp_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

MpScope::MpScope(unsigned digits10) : lock_(mp_mutex()), saved_(Mp::default_precision()) {
  Mp::default_precision(digits10);
}

MpScope::~MpScope() { Mp::default_precision(saved_); }

}  // namespace mixrabi
