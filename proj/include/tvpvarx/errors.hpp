#pragma once

#include <stdexcept>
#include <string>

namespace tvpvarx {

// Error taxonomy mirrors the CLI exit codes: config 2, data 3, numerical 4.
class Error : public std::runtime_error {
 public:
  enum class Kind { Config = 2, Data = 3, Numeric = 4 };
  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  Kind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(Kind::Config, what) {}
};
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(Kind::Data, what) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(Kind::Numeric, what) {}
};

struct NotPositiveDefinite : NumericError {
  explicit NotPositiveDefinite(const std::string& what = "matrix is not positive definite")
      : NumericError(what) {}
};
struct DimensionMismatch : NumericError {
  explicit DimensionMismatch(const std::string& what = "dimension mismatch") : NumericError(what) {}
};
struct InvalidDof : NumericError {
  explicit InvalidDof(const std::string& what = "degrees of freedom too small") : NumericError(what) {}
};
struct AllZeroWeights : NumericError {
  explicit AllZeroWeights(const std::string& what = "all categorical weights are zero")
      : NumericError(what) {}
};
struct SingularInnovationCovariance : NumericError {
  explicit SingularInnovationCovariance(const std::string& what = "innovation covariance is singular")
      : NumericError(what) {}
};
struct NearSingularLongRun : NumericError {
  explicit NearSingularLongRun(const std::string& what = "I - sum(B) is near singular")
      : NumericError(what) {}
};
struct InsufficientTrainingData : DataError {
  explicit InsufficientTrainingData(const std::string& what = "training sample too short")
      : DataError(what) {}
};
struct CollinearRegressors : NumericError {
  explicit CollinearRegressors(const std::string& what = "OLS normal equations are singular")
      : NumericError(what) {}
};
struct ChainDiverged : NumericError {
  explicit ChainDiverged(const std::string& what = "MCMC chain diverged") : NumericError(what) {}
};
struct EmptyChain : DataError {
  explicit EmptyChain(const std::string& what = "chain holds no retained draws") : DataError(what) {}
};
struct ExoPathTooShort : ConfigError {
  explicit ExoPathTooShort(const std::string& what = "exogenous path does not cover the horizon")
      : ConfigError(what) {}
};
struct NoRealizedValues : DataError {
  explicit NoRealizedValues(const std::string& what = "no realized values in evaluation window")
      : DataError(what) {}
};
struct ExplosiveSimulation : NumericError {
  explicit ExplosiveSimulation(const std::string& what = "simulated series exceeded overflow guard")
      : NumericError(what) {}
};

// Data ingestion errors; each message names the offending row.
struct ParseError : DataError {
  explicit ParseError(const std::string& what) : DataError(what) {}
};
struct MissingColumn : DataError {
  explicit MissingColumn(const std::string& what) : DataError(what) {}
};
struct NonPositiveLevel : DataError {
  explicit NonPositiveLevel(const std::string& what) : DataError(what) {}
};
struct DateGap : DataError {
  explicit DateGap(const std::string& what) : DataError(what) {}
};

}  // namespace tvpvarx
