#include "tactile/gesture.hpp"

#include <string>

#include "tactile/error.hpp"

namespace tactile {

namespace {

constexpr std::array<std::string_view, kNumClasses> kNames = {
    "TranslateXPos", "TranslateXNeg", "TranslateYPos", "TranslateYNeg", "TranslateZPos",
    "TranslateZNeg", "RotateXPos",    "RotateXNeg",    "RotateYPos",    "RotateYNeg",
    "RotateZPos",    "RotateZNeg",    "AuxInitPose",   "AuxHome",       "Invalid",
};

}  // namespace

GestureClass class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw DomainError("gesture index out of range: " + std::to_string(index));
  }
  return static_cast<GestureClass>(index);
}

std::string_view to_string(GestureClass c) noexcept {
  const auto i = static_cast<std::size_t>(c);
  return i < kNames.size() ? kNames[i] : std::string_view{"?"};
}

std::optional<GestureClass> parse_gesture(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<GestureClass>(i);
  }
  return std::nullopt;
}

int finger_count(GestureClass c) noexcept {
  switch (c) {
    case GestureClass::TranslateXNeg:
    case GestureClass::TranslateYPos:
    case GestureClass::TranslateYNeg:
    case GestureClass::TranslateZPos:
    case GestureClass::TranslateZNeg:
      return 1;
    case GestureClass::TranslateXPos:
    case GestureClass::RotateXPos:
    case GestureClass::RotateXNeg:
    case GestureClass::RotateYPos:
    case GestureClass::RotateYNeg:
    case GestureClass::RotateZPos:
    case GestureClass::RotateZNeg:
      return 2;
    case GestureClass::AuxInitPose:
    case GestureClass::AuxHome:
      return 5;
    case GestureClass::Invalid:
      return 0;
  }
  return 0;
}

}  // namespace tactile
