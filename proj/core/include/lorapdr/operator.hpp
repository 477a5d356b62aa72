#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lorapdr::controller {

enum class ActionKind { TurnOn, TurnOff };

struct Action {
    ActionKind kind = ActionKind::TurnOn;
    std::string device_id;
};

enum class Reply { Confirmed, Skipped };

std::string_view to_string(ActionKind kind);
std::string_view to_string(Reply reply);

/// Request/confirm channel to whoever physically toggles the devices. Every
/// prompt gets exactly one reply.
class OperatorInterface {
public:
    virtual ~OperatorInterface() = default;
    virtual Reply prompt(const Action& action) = 0;
};

/// Asks on a terminal: `turn on d1 [y/s]`. Empty input or y/yes confirms,
/// s/skip/n/no skips; anything else re-prompts. Throws OrchestrationError
/// at end of input.
class TerminalOperator : public OperatorInterface {
public:
    TerminalOperator(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    Reply prompt(const Action& action) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

/// Replays a transcript, one reply per line: `on <id> confirm|skip`,
/// `off <id> confirm|skip`, or a bare `confirm`/`skip`. `#` lines are
/// ignored. Throws OrchestrationError when the transcript runs out or names a
/// different action than the one prompted.
class ScriptedOperator : public OperatorInterface {
public:
    explicit ScriptedOperator(std::istream& transcript);
    explicit ScriptedOperator(std::vector<std::string> lines);
    Reply prompt(const Action& action) override;

    std::size_t remaining() const { return lines_.size() - next_; }

private:
    std::vector<std::string> lines_;
    std::size_t next_ = 0;
};

class AutoOperator : public OperatorInterface {
public:
    Reply prompt(const Action&) override { return Reply::Confirmed; }
};

/// Forwards to another operator and writes each exchange as a transcript line
/// that ScriptedOperator replays.
class RecordingOperator : public OperatorInterface {
public:
    RecordingOperator(OperatorInterface& inner, std::ostream& transcript) : inner_(inner), transcript_(transcript) {}
    Reply prompt(const Action& action) override;

private:
    OperatorInterface& inner_;
    std::ostream& transcript_;
};

std::string transcript_line(const Action& action, Reply reply);

/// Time source of an experiment, in seconds.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;
    virtual void wait_until(double t) = 0;
    void wait_for(double seconds) { wait_until(now() + seconds); }
};

/// Wall clock in seconds since the Unix epoch; waits by sleeping.
class SystemClock : public Clock {
public:
    double now() override;
    void wait_until(double t) override;
};

/// Manually advanced clock. Waiting jumps straight to the target time and
/// notifies the listeners with the new time.
class SimClock : public Clock {
public:
    explicit SimClock(double start = 0.0) : now_(start) {}

    double now() override { return now_; }
    void wait_until(double t) override;

    void on_advance(std::function<void(double)> listener) { listeners_.push_back(std::move(listener)); }

private:
    double now_;
    std::vector<std::function<void(double)>> listeners_;
};

}  // namespace lorapdr::controller
