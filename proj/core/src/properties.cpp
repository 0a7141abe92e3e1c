#include "flowtest/properties.hpp"

namespace flowtest {

const char* to_string(Property p) {
  switch (p) {
    case Property::EENI: return "eeni";
    case Property::LLNI: return "llni";
    case Property::SSNI: return "ssni";
    case Property::MSNI: return "msni";
  }
  return "?";
}

std::optional<Property> parse_property(const std::string& name) {
  if (name == "eeni") return Property::EENI;
  if (name == "llni") return Property::LLNI;
  if (name == "ssni") return Property::SSNI;
  if (name == "msni") return Property::MSNI;
  return std::nullopt;
}

const char* to_string(DiscardReason r) {
  switch (r) {
    case DiscardReason::FUEL: return "fuel";
    case DiscardReason::NOT_IN_END_SET: return "not-in-end-set";
    case DiscardReason::NO_SSNI_CLAUSE: return "no-ssni-clause";
  }
  return "?";
}

}  // namespace flowtest
