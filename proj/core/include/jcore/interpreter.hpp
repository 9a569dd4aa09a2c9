// SPDX-License-Identifier: Apache-2.0
//
// Definitional interpreter. A method environment at fuel j invokes bodies
// with fuel j - 1 for nested calls; a call at fuel 0 is FuelExhausted.

#ifndef JCORE_INTERPRETER_HPP
#define JCORE_INTERPRETER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/values.hpp"

namespace jcore {

struct Budget {
  int max_fuel = 1024;
  int loop_cap = 100000;
};

struct CallEvent {
  // Class at which the method meaning is taken: loctype of the receiver for
  // dynamic calls, super of the caller's class for super calls.
  std::string at_class;
  std::string method;
  std::string caller_class;
  Location self;
  const Store* callee_store = nullptr;
  const Heap* pre_heap = nullptr;
  Span span;
};

struct ReturnEvent {
  std::string at_class;
  std::string method;
  std::string caller_class;
  Location self;
  const Store* callee_store = nullptr;  // initial store of the callee
  const Heap* pre_heap = nullptr;
  const Heap* post_heap = nullptr;
  Value result;
  Span span;
};

class ExecObserver {
 public:
  virtual ~ExecObserver() = default;
  // After a command terminates normally; cls is the class whose code runs.
  virtual void after_command(const std::string& cls, const std::string& method,
                             const Stmt& s, const Heap& h, const Store& st) {
    (void)cls, (void)method, (void)s, (void)h, (void)st;
  }
  virtual void on_call(const CallEvent& ev) { (void)ev; }
  virtual void on_return(const ReturnEvent& ev) { (void)ev; }
  // Whether on_return needs the pre-call heap (it costs a copy).
  virtual bool wants_pre_heap() const { return false; }
};

class EntryClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Interpreter {
 public:
  explicit Interpreter(const ClassTable& ct, Allocator alloc = fresh,
                       ExecObserver* observer = nullptr,
                       int loop_cap = Budget{}.loop_cap);

  Outcome<Value> eval(const Heap& h, const Store& s, const Expr& e) const;

  // Executes S as code of class cls with calls at the given fuel.
  Outcome<GlobalState> exec(int fuel, const std::string& cls, const Stmt& s,
                            GlobalState st,
                            const std::string& method = {}) const;

  // Runs constructors root-first on a default-initialized object.
  Outcome<Heap> construct(const std::string& cls, Heap h,
                          const Location& l) const;

  // Allocates, default-initializes and constructs.
  Outcome<std::pair<Heap, Location>> new_object(const std::string& cls,
                                                Heap h) const;

  // Method meaning at fuel j for loctype of l.
  Outcome<std::pair<Heap, Value>> invoke(int fuel, const Location& l,
                                         const std::string& m,
                                         const std::vector<Value>& args,
                                         Heap h) const;
  // Method meaning taken at an explicit class (super calls).
  Outcome<std::pair<Heap, Value>> invoke_at(int fuel, const std::string& at,
                                            const Location& l,
                                            const std::string& m,
                                            const std::vector<Value>& args,
                                            Heap h) const;

  const ClassTable& table() const { return ct_; }

 private:
  struct Frame {
    std::string cls;
    std::string method;
  };

  std::optional<Bottom> run(int fuel, const Frame& f, const Stmt& s, Heap& h,
                            Store& st) const;
  std::optional<Bottom> call(int fuel, const Frame& f, const std::string& at,
                             const Location& self, const std::string& m,
                             std::vector<Value> args, Heap& h, Value& out,
                             const Span& span) const;
  std::optional<Bottom> construct_in_place(const std::string& cls, Heap& h,
                                           const Location& l) const;
  std::optional<Bottom> allocate(const std::string& cls, Heap& h,
                                 Location& out) const;

  const ClassTable& ct_;
  Allocator alloc_;
  ExecObserver* observer_;
  int loop_cap_;
};

struct RunResult {
  Outcome<GlobalState> outcome = Bottom{BottomReason::FuelExhausted, {}, {}};
  // Fuel of the returned outcome (max fuel tried when exhausted).
  int fuel = 0;
  std::vector<std::string> trace;
};

struct RunOptions {
  Budget budget;
  ExecObserver* observer = nullptr;
  bool trace = false;
  Allocator alloc = fresh;
  // Fixed fuel instead of iterative deepening.
  std::optional<int> fixed_fuel;
};

// Builds the entry object and runs the nullary entry method body with store
// [self, result]. Throws EntryClassError for owner/rep entries or a missing
// method.
RunResult run(const ClassTable& ct, const std::string& entry_class,
              const std::string& entry_method, const RunOptions& options = {});

// Fuel schedule 1, 2, 4, ... capped by max_fuel (which is always included).
std::vector<int> fuel_schedule(int max_fuel);

}  // namespace jcore

#endif  // JCORE_INTERPRETER_HPP
