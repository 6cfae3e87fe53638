#pragma once

#include <stdexcept>
#include <string>

namespace scatter {

// Error taxonomy mirrors the CLI exit codes: usage (bad input), precision
// (numerically unresolvable norm structure), coverage (requested range not
// served by the given table/spectrum), io (cache files).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class UsageError : public Error {
  public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Two distinct norms closer than the grouping tolerance on a lattice the
// user declared irrational. Never merged silently.
class PrecisionError : public Error {
  public:
    PrecisionError(const std::string& msg, double value_a, double value_b)
        : Error(msg), value_a(value_a), value_b(value_b) {}
    double value_a = 0;
    double value_b = 0;
};

class CoverageError : public Error {
  public:
    explicit CoverageError(const std::string& msg) : Error(msg) {}
};

// Table cutoff too small for the requested evaluation.
class CutoffError : public CoverageError {
  public:
    CutoffError(const std::string& msg, double required) : CoverageError(msg), required_cutoff(required) {}
    double required_cutoff = 0;
};

enum class IoErrorKind { OpenFailed, BadMagic, VersionMismatch, Corrupt };

class TableIoError : public Error {
  public:
    TableIoError(IoErrorKind kind, const std::string& msg) : Error(msg), kind(kind) {}
    IoErrorKind kind;
};

}  // namespace scatter
