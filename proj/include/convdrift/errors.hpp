#pragma once

#include <stdexcept>
#include <string>

namespace convdrift {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// corpus loading
class MalformedFile : public Error { public: using Error::Error; };
class SchemaViolation : public Error { public: using Error::Error; };
class DuplicateId : public Error { public: using Error::Error; };
class InvalidParams : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

// text vectorization
class EmptyCorpus : public Error { public: using Error::Error; };
class DegenerateInput : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };

// classifiers
class InsufficientData : public Error { public: using Error::Error; };
class SingleClassTrainingSet : public Error { public: using Error::Error; };
class InvalidBandwidth : public Error { public: using Error::Error; };

// drift detection
class InsufficientWindow : public Error { public: using Error::Error; };

// judge / providers
class UnparseableResponse : public Error { public: using Error::Error; };
class ProviderTimeout : public Error { public: using Error::Error; };

class ProviderHttpError : public Error {
public:
    ProviderHttpError(int status, const std::string& what)
        : Error(what), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// evaluation
class LengthMismatch : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };

}  // namespace convdrift
