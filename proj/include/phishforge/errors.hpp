#pragma once

#include <stdexcept>
#include <string>

namespace phishforge {

// Base for every error the toolchain raises on purpose. The CLI maps
// subclasses onto its exit-code table.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- usage / input ---
class InvalidUrl : public Error {
  public:
    using Error::Error;
};
class InvalidWeights : public Error {
  public:
    using Error::Error;
};
class UnknownFeature : public Error {
  public:
    using Error::Error;
};

// --- fetch stage ---
class NetworkError : public Error {
  public:
    using Error::Error;
};
class RedirectLoop : public NetworkError {
  public:
    using NetworkError::NetworkError;
};
class NonHtmlResponse : public NetworkError {
  public:
    using NetworkError::NetworkError;
};

// --- snapshot persistence ---
class IoError : public Error {
  public:
    using Error::Error;
};
class MissingManifest : public Error {
  public:
    using Error::Error;
};
class CorruptManifest : public Error {
  public:
    using Error::Error;
};
class MissingHtml : public Error {
  public:
    using Error::Error;
};

// --- document model ---
class InvalidEncoding : public Error {
  public:
    using Error::Error;
};
class StaleHandle : public Error {
  public:
    using Error::Error;
};

// --- features / generation ---
class ImageDecodeError : public Error {
  public:
    using Error::Error;
};
class NotApplicable : public Error {
  public:
    using Error::Error;
};
class NoApplicableFeatures : public Error {
  public:
    using Error::Error;
};

// --- dataset / evaluation ---
class AllSourcesFailed : public Error {
  public:
    using Error::Error;
};
class MissingPage : public Error {
  public:
    using Error::Error;
};

}  // namespace phishforge
