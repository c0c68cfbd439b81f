#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tactile/control/state_machine.hpp"
#include "tactile/model/classifier.hpp"

namespace tactile::service {

/// One record per control tick.
struct StateEvent {
  std::uint64_t tick = 0;
  std::uint64_t timestamp_us = 0;
  GestureClass detected = GestureClass::Invalid;
  model::Probabilities probs{};
  bool contact = false;
  std::optional<GestureClass> active;
  control::Command command;
  bool recovering = false;
  control::Pose pose;
};

inline constexpr int kEventSchemaVersion = 1;

/// Single-line JSON with a fixed key order:
///   {"v","type":"state","tick","t_us","detected","p"[15],"contact","active","cmd","recovering","pose":{"p","q"}}
/// cmd is null, {"twist":{"linear","angular"}} or {"aux":"initial"|"home"}; q is (w,x,y,z).
/// Probabilities are rounded to 1e-6 and pose components to 1e-9 so logs stay byte-stable.
std::string to_record(const StateEvent& event);

}  // namespace tactile::service
