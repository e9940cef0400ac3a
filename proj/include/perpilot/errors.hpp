#pragma once

#include <stdexcept>
#include <string>

namespace perpilot {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File or document could not be read/decoded (corpus, scenario, memory, script).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A record or argument violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Model output that matches none of the expected output grammars.
class GrammarError : public Error {
 public:
  GrammarError(const std::string& what, std::string raw_output)
      : Error(what), raw(std::move(raw_output)) {}
  std::string raw;
};

// Transport or model-side failure from an LLM backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

// An element is present in memory but its phrase does not occur in the text.
class SubstitutionError : public Error {
 public:
  SubstitutionError(const std::string& what, std::string element_phrase)
      : Error(what), phrase(std::move(element_phrase)) {}
  std::string phrase;
};

enum class PlanErrorKind {
  CountMismatch,       // number of plan lines != number of unresolved elements
  BadLine,             // line does not follow "From the app X, obtain ..."
  UnknownApp,          // named app is not installed
  ElementUnmentioned,  // an unresolved element is not covered by exactly one line
};

class PlanError : public Error {
 public:
  PlanError(PlanErrorKind k, const std::string& what) : Error(what), kind(k) {}
  PlanErrorKind kind;
};

}  // namespace perpilot
