#pragma once

#include <stdexcept>
#include <string>

namespace muord {

enum class Errc {
    EmptyDatum,
    ConstantSumViolation,
    ConventionViolation,
    WrongCase,
    BadEpsilon,
    TruncationTooSmall,
    MalformedDiagram,
    BadChoice,
    IndexOutOfRange,
    EmptyS2,
    MissingValuation,
    NotBad,
    StuckState,
    ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace muord
