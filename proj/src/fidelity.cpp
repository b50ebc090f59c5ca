#include "mqst/fidelity.hpp"

namespace mqst {

std::string to_string(StateTag tag) {
  switch (tag) {
    case StateTag::Omega0: return "omega0";
    case StateTag::Omega1: return "omega1";
    case StateTag::Omega2: return "omega2";
  }
  return "unknown";
}

StateTag parse_state_tag(std::string_view name) {
  if (name == "omega0") return StateTag::Omega0;
  if (name == "omega1") return StateTag::Omega1;
  if (name == "omega2") return StateTag::Omega2;
  throw std::invalid_argument("unknown state tag '" + std::string(name) + "'");
}

}  // namespace mqst
