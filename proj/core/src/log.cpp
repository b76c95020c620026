#include "mfml/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace mfml {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s;
  return s;
}

}  // namespace

WarningSink set_warning_sink(WarningSink next) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(sink(), std::move(next));
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) {
    sink()(message);
    return;
  }
  std::cerr << "warning: " << message << '\n';
}

}  // namespace mfml
