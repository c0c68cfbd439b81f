#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tactile {

/// Fifteen-way gesture label. The numeric value is the classifier's output index.
enum class GestureClass : std::uint8_t {
  TranslateXPos = 0,  // two-finger pinch-in
  TranslateXNeg,      // single-finger push
  TranslateYPos,      // single-finger right swipe
  TranslateYNeg,      // single-finger left swipe
  TranslateZPos,      // single-finger up swipe
  TranslateZNeg,      // single-finger down swipe
  RotateXPos,         // two-finger clockwise circular stroke
  RotateXNeg,         // two-finger anti-clockwise circular stroke
  RotateYPos,         // two-finger up swipe
  RotateYNeg,         // two-finger down swipe
  RotateZPos,         // two-finger right swipe
  RotateZNeg,         // two-finger left swipe
  AuxInitPose,        // five-finger pinch-in
  AuxHome,            // five-finger pinch-out
  Invalid,
};

inline constexpr int kNumClasses = 15;
inline constexpr int kNumGestures = 14;

inline constexpr std::array<GestureClass, kNumClasses> kAllClasses = {
    GestureClass::TranslateXPos, GestureClass::TranslateXNeg, GestureClass::TranslateYPos,
    GestureClass::TranslateYNeg, GestureClass::TranslateZPos, GestureClass::TranslateZNeg,
    GestureClass::RotateXPos,    GestureClass::RotateXNeg,    GestureClass::RotateYPos,
    GestureClass::RotateYNeg,    GestureClass::RotateZPos,    GestureClass::RotateZNeg,
    GestureClass::AuxInitPose,   GestureClass::AuxHome,       GestureClass::Invalid,
};

constexpr int index_of(GestureClass c) noexcept { return static_cast<int>(c); }

/// Throws DomainError when `index` is outside [0, 15).
GestureClass class_from_index(int index);

std::string_view to_string(GestureClass c) noexcept;
std::optional<GestureClass> parse_gesture(std::string_view name) noexcept;

constexpr bool is_auxiliary(GestureClass c) noexcept {
  return c == GestureClass::AuxInitPose || c == GestureClass::AuxHome;
}

constexpr bool is_motion(GestureClass c) noexcept {
  return c != GestureClass::Invalid && !is_auxiliary(c);
}

/// Number of fingers in the canonical trajectory of a gesture (Invalid has no fixed count).
int finger_count(GestureClass c) noexcept;

}  // namespace tactile
