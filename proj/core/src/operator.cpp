#include "lorapdr/operator.hpp"

#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::controller {

namespace {

std::string lowercase_trimmed(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (c != ' ' && c != '\t' && c != '\r') {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

Reply parse_reply_word(const std::string& word, std::string_view line)
{
    if (word == "confirm" || word == "confirmed") {
        return Reply::Confirmed;
    }
    if (word == "skip" || word == "skipped") {
        return Reply::Skipped;
    }
    throw OrchestrationError(fmt::format("unrecognized transcript reply '{}'", line));
}

}  // namespace

std::string_view to_string(ActionKind kind)
{
    return kind == ActionKind::TurnOn ? "on" : "off";
}

std::string_view to_string(Reply reply)
{
    return reply == Reply::Confirmed ? "confirm" : "skip";
}

std::string transcript_line(const Action& action, Reply reply)
{
    return fmt::format("{} {} {}", to_string(action.kind), action.device_id, to_string(reply));
}

Reply TerminalOperator::prompt(const Action& action)
{
    while (true) {
        out_ << fmt::format("turn {} {} [y/s]: ", to_string(action.kind), action.device_id) << std::flush;
        std::string line;
        if (!std::getline(in_, line)) {
            throw OrchestrationError(
                fmt::format("operator input closed while waiting on turn {} {}", to_string(action.kind), action.device_id));
        }
        const auto answer = lowercase_trimmed(line);
        if (answer.empty() || answer == "y" || answer == "yes") {
            return Reply::Confirmed;
        }
        if (answer == "s" || answer == "skip" || answer == "n" || answer == "no") {
            return Reply::Skipped;
        }
        out_ << "please answer y (done) or s (skip)\n";
    }
}

ScriptedOperator::ScriptedOperator(std::istream& transcript)
{
    std::string line;
    while (std::getline(transcript, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        lines_.push_back(line);
    }
}

ScriptedOperator::ScriptedOperator(std::vector<std::string> lines) : lines_(std::move(lines)) {}

Reply ScriptedOperator::prompt(const Action& action)
{
    if (next_ >= lines_.size()) {
        throw OrchestrationError(fmt::format("operator script exhausted at turn {} {}", to_string(action.kind),
                                             action.device_id));
    }
    const auto& line = lines_[next_++];
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string token; words >> token;) {
        tokens.push_back(token);
    }
    if (tokens.size() == 1) {
        return parse_reply_word(lowercase_trimmed(tokens[0]), line);
    }
    if (tokens.size() != 3) {
        throw OrchestrationError(fmt::format("malformed transcript line '{}'", line));
    }
    if (tokens[0] != to_string(action.kind) || tokens[1] != action.device_id) {
        throw OrchestrationError(fmt::format("transcript expects '{} {}' but was prompted for '{} {}'", tokens[0],
                                             tokens[1], to_string(action.kind), action.device_id));
    }
    return parse_reply_word(lowercase_trimmed(tokens[2]), line);
}

Reply RecordingOperator::prompt(const Action& action)
{
    const auto reply = inner_.prompt(action);
    transcript_ << transcript_line(action, reply) << '\n' << std::flush;
    return reply;
}

double SystemClock::now()
{
    using namespace std::chrono;
    return duration<double>(system_clock::now().time_since_epoch()).count();
}

void SystemClock::wait_until(double t)
{
    const double remaining = t - now();
    if (remaining > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(remaining));
    }
}

void SimClock::wait_until(double t)
{
    if (t > now_) {
        now_ = t;
    }
    for (const auto& listener : listeners_) {
        listener(now_);
    }
}

}  // namespace lorapdr::controller
