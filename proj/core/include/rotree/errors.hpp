#pragma once

#include <stdexcept>
#include <string>

namespace rotree {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* malformed serialized input: degree sequences, walks, JSON, CSV */
struct ParseError : Error {
    using Error::Error;
};

/* the one-vertex tree where an operation needs at least one edge */
struct DegenerateTreeError : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

/* no tree of the requested size has positive probability under the law */
struct InadmissibleSizeError : Error {
    using Error::Error;
};

/* rejection sampler hit its retry cap */
struct SamplerBudgetError : Error {
    using Error::Error;
};

/* all points of a cloud coincide */
struct DegenerateCloudError : Error {
    using Error::Error;
};

}  // namespace rotree
