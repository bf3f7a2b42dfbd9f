#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace s2v {

// Base for all toolkit errors. Subclasses exist so callers can react to a
// specific failure rather than parsing messages.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text; carries the 1-based line number of the offender.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateWord : public Error {
 public:
  explicit DuplicateWord(const std::string& word)
      : Error("duplicate word: " + word), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class WordNotFound : public Error {
 public:
  explicit WordNotFound(const std::string& word)
      : Error("word not found: " + word), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

// All-zero vector cannot be normalized, so similarity is undefined.
class DegenerateVector : public Error {
 public:
  explicit DegenerateVector(const std::string& word)
      : Error("zero vector for word: " + word), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class InvalidK : public Error {
 public:
  explicit InvalidK(const std::string& msg) : Error(msg) {}
};

class InvalidN : public Error {
 public:
  explicit InvalidN(const std::string& msg) : Error(msg) {}
};

class NoEvaluablePairs : public Error {
 public:
  NoEvaluablePairs() : Error("no pair has both words in the vocabulary") {}
};

// Rank transform is undefined when one input sequence is constant.
class DegenerateRanks : public Error {
 public:
  explicit DegenerateRanks(const std::string& msg) : Error(msg) {}
};

class InsufficientPairs : public Error {
 public:
  explicit InsufficientPairs(const std::string& msg) : Error(msg) {}
};

class TooFewPoints : public Error {
 public:
  explicit TooFewPoints(const std::string& msg) : Error(msg) {}
};

class InvalidDistances : public Error {
 public:
  explicit InvalidDistances(const std::string& msg) : Error(msg) {}
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& msg) : Error(msg) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

}  // namespace s2v
