#pragma once

#include <stdexcept>
#include <string>

namespace edsim {

// Structural problems in a config or catalog document: malformed text,
// wrong types, unknown keys.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed documents that violate a semantic invariant (missing baseline,
// duplicate ids, out-of-range sampling values, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Misuse of the dialogue state machine, e.g. injecting a mediator after
// generation started.
class DialogueError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class StatsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Scoring failures that abort a batch (transport errors, per-item model
// failures surfaced by the remote service).
class ScorerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace edsim
