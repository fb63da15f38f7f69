#pragma once

#include <stdexcept>
#include <string>

namespace launcher {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A value outside its documented range (actuation, angle, gain, ...).
class RangeError : public Error
{
public:
    using Error::Error;
};

class CalibrationError : public Error
{
public:
    using Error::Error;
};

class IntegrationError : public Error
{
public:
    using Error::Error;
};

/// No descending-then-ascending height pattern around the lowest sample.
class NoReboundError : public Error
{
public:
    using Error::Error;
};

class FormatError : public Error
{
public:
    using Error::Error;
};

class TrainingError : public Error
{
public:
    using Error::Error;
};

/// Connection, bind or transport failure.
class NetworkError : public Error
{
public:
    using Error::Error;
};

/// No reply within the session timeout.
class TimeoutError : public NetworkError
{
public:
    using NetworkError::NetworkError;
};

/// The server answered ok = false; the message is its error text.
class RequestRejected : public Error
{
public:
    using Error::Error;
};

/// The crank found the supply channel empty.
class FeedStarvedError : public Error
{
public:
    using Error::Error;
};

} // namespace launcher
