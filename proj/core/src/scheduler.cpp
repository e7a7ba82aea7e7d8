#include "redsched/scheduler.hpp"

#include <cassert>

namespace redsched {

const char* to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::idle: return "Idle";
    case PhaseKind::exec_instr: return "ExecInstr";
    case PhaseKind::rejecting: return "Rejecting";
    case PhaseKind::reclaim_try: return "ReclaimTry";
    case PhaseKind::reclaim_redo: return "ReclaimRedo";
  }
  return "?";
}

RedScheduler::RedScheduler(SchedulerConfig cfg)
    : cfg_(cfg), ready_(cfg.ready_capacity), reject_(cfg.reject_capacity) {}

void RedScheduler::emit(std::vector<EventRecord>& events, EventKind kind,
                        ProcessId id, Criticality crit) const {
  events.push_back(EventRecord{now_, kind, id, crit});
}

CycleOutput RedScheduler::step(std::optional<Instruction> instr) {
  if (instr) {
    if (phase_.kind != PhaseKind::idle) throw InstructionWhileBusyError();
    phase_ = ControlPhase{PhaseKind::exec_instr, 2, *instr, 0};
  }

  CycleOutput out;
  out.cycle = now_;
  if (const ProcessDescriptor* h = ready_.head()) out.process_to_run = h->id;
  out.busy = phase_.kind != PhaseKind::idle;
  out.phase = phase_.kind;

  // The dispatched head consumes one cycle regardless of coprocessor
  // busyness; the CPU never stalls on the scheduler.
  if (auto done = ready_.tick(now_)) {
    live_.erase(*done);
    ++ready_version_;
    emit(out.events, EventKind::completed, *done);
  }

  if (phase_.kind != PhaseKind::idle) {
    assert(phase_.cycles_left == 1 || phase_.cycles_left == 2);
    if (--phase_.cycles_left == 0) {
      ControlPhase finished = phase_;
      phase_ = ControlPhase{};
      switch (finished.kind) {
        case PhaseKind::exec_instr:
          apply_instruction(*finished.instr, out.events);
          break;
        case PhaseKind::rejecting:
          apply_reject(out.events);
          break;
        case PhaseKind::reclaim_try:
          apply_reclaim(finished.reclaim_id, out.events);  // may enter reclaim_redo
          break;
        case PhaseKind::reclaim_redo:
          break;  // latency only; the queues were restored when the try failed
        case PhaseKind::idle:
          break;
      }
    }
  }

  if (phase_.kind == PhaseKind::idle) control_eval(out.events);

  ++now_;
  return out;
}

void RedScheduler::apply_instruction(const Instruction& in,
                                     std::vector<EventRecord>& events) {
  if (in.is_insert())
    apply_insert(in.desc(), events);
  else
    apply_kill(in.kill_id(), events);
}

void RedScheduler::apply_insert(const ProcessDescriptor& d,
                                std::vector<EventRecord>& events) {
  if (live_.count(d.id)) {
    emit(events, EventKind::duplicate_id_ignored, d.id);
    return;
  }
  emit(events, EventKind::accepted, d.id);
  live_.insert(d.id);
  ++ready_version_;
  auto res = ready_.insert(d, now_);
  if (res.displaced) {
    const ProcessDescriptor& v = res.displaced->desc;
    if (v.criticality == Criticality::hard_rt) {
      // A hard-RT process may not enter the reject queue; a full cell array
      // loses its tail, so the drop is recorded and surfaced.
      live_.erase(v.id);
      emit(events, EventKind::capacity_drop, v.id);
    } else {
      emit(events, EventKind::rejected, v.id);
      auto rj = reject_.insert(v);
      if (rj.dropped) {
        live_.erase(rj.dropped->id);
        emit(events, EventKind::capacity_drop, rj.dropped->id);
      }
    }
  }
}

void RedScheduler::apply_kill(ProcessId id, std::vector<EventRecord>& events) {
  if (ready_.remove(id, now_)) {
    live_.erase(id);
    ++ready_version_;
    emit(events, EventKind::killed, id);
  } else if (reject_.remove(id)) {
    live_.erase(id);
    emit(events, EventKind::killed, id);
  } else {
    emit(events, EventKind::unknown_id_ignored, id);
  }
}

void RedScheduler::apply_reject(std::vector<EventRecord>& events) {
  OverloadReport rep = ready_.overload(now_);
  if (!rep.any_overload) return;  // cleared while the phase ran

  if (rep.victim) {
    const ProcessId vid = rep.victim->second;
    auto cell = ready_.remove(vid, now_);
    assert(cell);
    ++ready_version_;
    emit(events, EventKind::rejected, vid);
    auto rj = reject_.insert(cell->desc);
    if (rj.dropped) {
      live_.erase(rj.dropped->id);
      emit(events, EventKind::capacity_drop, rj.dropped->id);
    }
  } else {
    // Every candidate is hard-RT: nothing may be moved. Record the predicted
    // miss of the first overloading cell once; the control unit keeps the
    // machine busy until the infeasible prefix drains.
    const ReadyCell& c = ready_.cells()[*rep.first_overload_pos];
    if (!c.miss_reported) {
      ready_.find(c.desc.id)->miss_reported = true;
      emit(events, EventKind::hard_overload, c.desc.id, c.desc.criticality);
      emit(events, EventKind::deadline_miss, c.desc.id, c.desc.criticality);
    }
  }
}

void RedScheduler::apply_reclaim(ProcessId pin, std::vector<EventRecord>& events) {
  // The reject queue cannot change during the two busy cycles, so the
  // pinned head is still present; the ready queue can only have shrunk.
  std::vector<ReadyCell> pre_ready;
  std::vector<ProcessDescriptor> pre_reject;
  if (cfg_.self_check) {
    pre_ready = ready_.snapshot();
    pre_reject = reject_.snapshot();
  }

  auto d = reject_.remove(pin);
  assert(d);
  auto ins = ready_.insert(*d, now_);
  assert(!ins.displaced);

  if (!ins.report.any_overload) {
    ++ready_version_;
    emit(events, EventKind::reclaimed, pin);
    return;
  }

  // Redo: the move is reverted here, atomically; the reclaim_redo phase
  // charges the 2-cycle cost of moving the process back.
  ready_.remove(pin, now_);
  reject_.insert(*d);
  failed_reclaim_ = ReclaimGuard{pin, ready_version_};
  emit(events, EventKind::reclaim_redone, pin);
  if (cfg_.self_check) {
    if (ready_.snapshot() != pre_ready || reject_.snapshot() != pre_reject)
      throw SchedulerError("failed reclaim did not restore queue state");
    ++restorations_verified_;
  }
  phase_ = ControlPhase{PhaseKind::reclaim_redo, 2, std::nullopt, pin};
}

void RedScheduler::control_eval(std::vector<EventRecord>& events) {
  // An expired rejected process can never be reclaimed on time; purge it
  // and record the miss for soft-RT criticalities.
  for (const ProcessDescriptor& d : reject_.purge_expired(now_)) {
    live_.erase(d.id);
    emit(events, EventKind::expired_purged, d.id);
    if (d.criticality == Criticality::soft_medium ||
        d.criticality == Criticality::soft_high)
      emit(events, EventKind::deadline_miss, d.id, d.criticality);
  }

  OverloadReport rep = ready_.overload(now_);
  if (rep.any_overload) {
    phase_ = ControlPhase{PhaseKind::rejecting, 2, std::nullopt, 0};
    return;
  }

  if (!reject_.empty() && !ready_.full()) {
    const ProcessDescriptor* head = reject_.peek_reclaim();
    const bool blocked = failed_reclaim_ && failed_reclaim_->id == head->id &&
                         failed_reclaim_->version == ready_version_;
    if (!blocked)
      phase_ = ControlPhase{PhaseKind::reclaim_try, 2, std::nullopt, head->id};
  }
}

bool RedScheduler::live_ids_consistent() const {
  if (live_.size() != ready_.size() + reject_.size()) return false;
  for (const ReadyCell& c : ready_.cells())
    if (!live_.count(c.desc.id)) return false;
  for (const ProcessDescriptor& d : reject_.cells())
    if (!live_.count(d.id)) return false;
  return true;
}

void RedScheduler::seed_ready(const ProcessDescriptor& d, std::uint32_t rem_wcet) {
  ready_.seed(d, rem_wcet == 0 ? d.wcet : rem_wcet, now_);
  live_.insert(d.id);
  ++ready_version_;
}

void RedScheduler::seed_reject(const ProcessDescriptor& d) {
  reject_.insert(d);
  live_.insert(d.id);
}

}  // namespace redsched
