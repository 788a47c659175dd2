#include "cogito/needs_unit.hpp"

#include <algorithm>

#include "cogito/error.hpp"

namespace cogito {

const Need& NeedStore::add_need(std::string_view text, std::int64_t priority) {
  std::string trimmed = trim(text);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyText, "need text is empty");
  if (priority < 0) throw Error(ErrorCode::PreconditionViolation, "priority must be >= 0");
  needs_.push_back(Need{ids_->next<NeedId>(), std::move(trimmed), priority, NeedStatus::pending});
  return needs_.back();
}

std::optional<Need> NeedStore::pop_next() {
  if (active()) throw Error(ErrorCode::ActiveExists, "need " + active()->id.value + " is still active");
  Need* best = nullptr;
  for (auto& need : needs_) {
    if (need.status != NeedStatus::pending) continue;
    // strict < keeps the earliest inserted among equal priorities
    if (!best || need.priority < best->priority) best = &need;
  }
  if (!best) return std::nullopt;
  best->status = NeedStatus::active;
  return *best;
}

std::vector<ScheduledAction> NeedStore::schedule_actions(const NeedId& need, std::span<const std::string> texts) {
  const Need* target = find(need);
  if (!target) throw Error(ErrorCode::UnknownNeed, need.value);
  if (target->status != NeedStatus::active) throw Error(ErrorCode::NotActive, need.value);
  if (texts.empty()) throw Error(ErrorCode::EmptyActionList, need.value);

  std::vector<std::string> cleaned;
  cleaned.reserve(texts.size());
  for (const auto& text : texts) {
    auto t = trim(text);
    if (t.empty()) throw Error(ErrorCode::EmptyText, "action text is empty");
    cleaned.push_back(std::move(t));
  }

  auto next_index = static_cast<std::int64_t>(
      std::count_if(actions_.begin(), actions_.end(), [&](const ScheduledAction& a) { return a.origin_need == need; }));
  std::vector<ScheduledAction> added;
  for (auto& text : cleaned) {
    added.push_back(ScheduledAction{ids_->next<ActionId>(), std::move(text), need, next_index++, ActionStatus::planned});
  }
  actions_.insert(actions_.end(), added.begin(), added.end());
  return added;
}

void NeedStore::complete(const NeedId& need) {
  Need* target = find_mut(need);
  if (!target) throw Error(ErrorCode::UnknownNeed, need.value);
  if (target->status != NeedStatus::active) throw Error(ErrorCode::NotActive, need.value);
  target->status = NeedStatus::satisfied;
}

std::optional<Need> NeedStore::active() const {
  for (const auto& need : needs_) {
    if (need.status == NeedStatus::active) return need;
  }
  return std::nullopt;
}

const Need* NeedStore::find(const NeedId& id) const {
  auto it = std::find_if(needs_.begin(), needs_.end(), [&](const Need& n) { return n.id == id; });
  return it == needs_.end() ? nullptr : &*it;
}

Need* NeedStore::find_mut(const NeedId& id) {
  auto it = std::find_if(needs_.begin(), needs_.end(), [&](const Need& n) { return n.id == id; });
  return it == needs_.end() ? nullptr : &*it;
}

std::vector<ScheduledAction> NeedStore::actions_for(const NeedId& id) const {
  std::vector<ScheduledAction> out;
  std::copy_if(actions_.begin(), actions_.end(), std::back_inserter(out),
               [&](const ScheduledAction& a) { return a.origin_need == id; });
  return out;
}

bool NeedStore::has_pending() const {
  return std::any_of(needs_.begin(), needs_.end(), [](const Need& n) { return n.status == NeedStatus::pending; });
}

}  // namespace cogito
