#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogito/model.hpp"

namespace cogito {

// Internal goals plus the actions the thinking unit scheduled for them.
//
// Ordering policy: smallest priority first, insertion order breaks ties.
// Needs are never removed, only marked satisfied. At most one need is active.
class NeedStore {
 public:
  explicit NeedStore(IdGenerator& ids) : ids_(&ids) {}

  // Throws EmptyText when the trimmed text is empty.
  const Need& add_need(std::string_view text, std::int64_t priority);

  // Activates and returns the next pending need, or nullopt when none is
  // pending. Throws ActiveExists while another need is active.
  std::optional<Need> pop_next();

  // Appends planned actions for an active need; sequence indices continue
  // after any actions already scheduled for it.
  std::vector<ScheduledAction> schedule_actions(const NeedId& need, std::span<const std::string> texts);

  // active -> satisfied. Throws NotActive otherwise (including twice).
  void complete(const NeedId& need);

  const std::vector<Need>& needs() const { return needs_; }
  const std::vector<ScheduledAction>& actions() const { return actions_; }
  std::optional<Need> active() const;
  const Need* find(const NeedId& id) const;
  std::vector<ScheduledAction> actions_for(const NeedId& id) const;
  bool has_pending() const;

 private:
  Need* find_mut(const NeedId& id);

  IdGenerator* ids_;
  std::vector<Need> needs_;
  std::vector<ScheduledAction> actions_;
};

}  // namespace cogito
