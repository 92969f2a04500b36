#ifndef CMX_ERROR_H_
#define CMX_ERROR_H_

#include <stdexcept>
#include <string>

namespace cmx {

// Malformed or inconsistent input data: corrupt files, unknown language
// codes, empty corpora. Callers bugs (bad indices, violated preconditions)
// raise std::invalid_argument / std::out_of_range instead.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric failure during training (non-finite loss or parameters).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmx

#endif  // CMX_ERROR_H_
