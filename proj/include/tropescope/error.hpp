#pragma once

#include <stdexcept>
#include <string>

namespace tropescope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// URL does not follow the /pmwiki/pmwiki.php/<Namespace>/<Title> pattern.
class NotAWikiPage : public Error {
 public:
  using Error::Error;
};

/// An entity key was registered as both a film and a trope.
class KindConflict : public Error {
 public:
  using Error::Error;
};

/// Malformed dataset, fixture or configuration document.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Stored meta counts disagree with the counts recomputed from the body.
class MetaMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FileUnreadable : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// A pagination page whose owner is neither a film nor a trope.
class UnownedPagination : public Error {
 public:
  using Error::Error;
};

/// No seed page could be retrieved.
class EmptyCrawl : public Error {
 public:
  using Error::Error;
};

}  // namespace tropescope
