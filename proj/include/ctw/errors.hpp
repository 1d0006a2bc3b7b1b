#pragma once

#include <stdexcept>
#include <string>

namespace ctw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  AlphabetMismatch() : Error("words over different alphabets") {}
};

class LengthCapExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class NotSmallCancellation : public Error {
 public:
  using Error::Error;
};

class NotMember : public Error {
 public:
  using Error::Error;
};

}  // namespace ctw
