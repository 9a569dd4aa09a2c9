// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "jcore/confinement.hpp"

namespace jcore {

ConfinementMonitor::ConfinementMonitor(const ClassTable& ct, MonitorMode mode)
    : ct_(ct), mode_(mode) {}

void ConfinementMonitor::report(ConfinementViolation v, const Span& span,
                                const std::string& context) {
  v.span = span;
  if (v.context.empty()) {
    v.context = context;
  } else {
    v.context = context + ": " + v.context;
  }
  if (std::find(violations_.begin(), violations_.end(), v) ==
      violations_.end()) {
    violations_.push_back(std::move(v));
  }
}

std::optional<Partition> ConfinementMonitor::heap_ok(
    const Heap& h, const Span& span, const std::string& context) {
  auto res = confine_heap(ct_, h);
  if (auto* v = std::get_if<ConfinementViolation>(&res)) {
    report(*v, span, context);
    return std::nullopt;
  }
  return std::get<Partition>(std::move(res));
}

void ConfinementMonitor::after_command(const std::string& cls,
                                       const std::string& method,
                                       const Stmt& s, const Heap& h,
                                       const Store& st) {
  if (mode_ != MonitorMode::Every) return;
  std::string ctx = "after command in " + cls + "." + method;
  auto p = heap_ok(h, s.span, ctx);
  if (!p) return;
  if (auto v = confined_store(ct_, cls, st, h, *p)) report(*v, s.span, ctx);
}

void ConfinementMonitor::on_call(const CallEvent& ev) {
  if (mode_ == MonitorMode::Off) return;
  std::string ctx = "arguments of " + ev.at_class + "." + ev.method;
  auto p = heap_ok(*ev.pre_heap, ev.span, ctx);
  if (!p) return;
  if (auto v = confined_store(ct_, ev.at_class, *ev.callee_store,
                              *ev.pre_heap, *p)) {
    report(*v, ev.span, ctx);
  }
}

void ConfinementMonitor::on_return(const ReturnEvent& ev) {
  if (mode_ == MonitorMode::Off) return;
  std::string ctx = "return of " + ev.at_class + "." + ev.method;
  auto post = heap_ok(*ev.post_heap, ev.span, ctx);
  if (!post) return;
  if (auto v = confined_store(ct_, ev.at_class, *ev.callee_store,
                              *ev.post_heap, *post)) {
    report(*v, ev.span, ctx);
  }
  if (ev.pre_heap) {
    auto pre = confine_heap(ct_, *ev.pre_heap);
    if (auto* p0 = std::get_if<Partition>(&pre)) {
      if (auto v = check_hext(ct_, *p0, *ev.post_heap)) {
        report(*v, ev.span, ctx);
      }
    }
  }

  const Value& d = ev.result;
  if (!d.is_loc()) return;
  Role r = ct_.role_of_class(ev.at_class);
  Role dr = ct_.role_of_class(d.loc.cls);
  bool in_module = r == Role::Rep ||
                   (r == Role::Owner && ct_.mscope(ev.method, ev.at_class));
  if (in_module) {
    Store with = *ev.callee_store;
    with["$result"] = d;
    if (auto v = confined_store(ct_, ev.at_class, with, *ev.post_heap,
                                *post)) {
      v->kind = ViolationKind::ResultViolation;
      report(*v, ev.span, ctx);
    }
  } else if (dr == Role::Rep) {
    ConfinementViolation v;
    v.kind = ViolationKind::ResultViolation;
    v.witness = {ev.self, d.loc};
    v.field = "result";
    report(std::move(v), ev.span, ctx + ": rep returned");
  }
}

MonitorResult run_with_monitor(const ClassTable& ct,
                               const std::string& entry_class,
                               const std::string& entry_method,
                               MonitorMode mode, RunOptions options) {
  ConfinementMonitor mon(ct, mode);
  if (mode != MonitorMode::Off) options.observer = &mon;
  MonitorResult out;
  // Violations of the last (deciding) run only.
  std::vector<int> schedule =
      options.fixed_fuel ? std::vector<int>{*options.fixed_fuel}
                         : fuel_schedule(options.budget.max_fuel);
  for (int fuel : schedule) {
    mon.clear();
    RunOptions once = options;
    once.fixed_fuel = fuel;
    out.run = run(ct, entry_class, entry_method, once);
    if (!out.run.outcome.fuel_exhausted()) break;
  }
  out.violations = mon.violations();
  return out;
}

}  // namespace jcore
