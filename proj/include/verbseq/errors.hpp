#ifndef VERBSEQ_ERRORS_HPP
#define VERBSEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace verbseq {

// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Corpus file violations.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

class ValueError : public Error {
public:
    explicit ValueError(const std::string& msg) : Error(msg) {}
};

class DuplicateError : public Error {
public:
    explicit DuplicateError(const std::string& msg) : Error(msg) {}
};

class EmptyCorpusError : public Error {
public:
    explicit EmptyCorpusError(const std::string& msg) : Error(msg) {}
};

// Numeric-layer violations.
class EmptySamplesError : public Error {
public:
    explicit EmptySamplesError(const std::string& msg) : Error(msg) {}
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& msg) : Error(msg) {}
};

class IndexOutOfRangeError : public Error {
public:
    explicit IndexOutOfRangeError(const std::string& msg) : Error(msg) {}
};

class SymbolOutOfRangeError : public Error {
public:
    explicit SymbolOutOfRangeError(const std::string& msg) : Error(msg) {}
};

class InvalidKError : public Error {
public:
    explicit InvalidKError(const std::string& msg) : Error(msg) {}
};

class TooFewVectorsError : public Error {
public:
    explicit TooFewVectorsError(const std::string& msg) : Error(msg) {}
};

class SingletonPartitionError : public Error {
public:
    explicit SingletonPartitionError(const std::string& msg) : Error(msg) {}
};

class EmptyInputError : public Error {
public:
    explicit EmptyInputError(const std::string& msg) : Error(msg) {}
};

class DegenerateTableError : public Error {
public:
    explicit DegenerateTableError(const std::string& msg) : Error(msg) {}
};

class InvalidSpecError : public Error {
public:
    explicit InvalidSpecError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace verbseq

#endif
