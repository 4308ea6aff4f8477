#pragma once

#include <stdexcept>
#include <string>

namespace kmv {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations on user-supplied values (CLI exit code 2).
struct bad_input : error {
    using error::error;
};

// Two supposedly-equal computation routes disagreed (CLI exit code 1).
struct internal_mismatch : error {
    using error::error;
};

// An exact division produced a non-integral result.
struct not_integral : internal_mismatch {
    using internal_mismatch::internal_mismatch;
};

// reconstruct() given a pair with f(a) != g(b).
struct not_compatible : bad_input {
    using bad_input::bad_input;
};

struct not_a_unit : bad_input {
    using bad_input::bad_input;
};

struct not_in_span : bad_input {
    using bad_input::bad_input;
};

// Requested computation exceeds the exact-arithmetic grid (CLI exit code 3).
struct unsupported_scale : error {
    using error::error;
};

// Echelon pivots did not stabilize inside the saturation window (CLI exit code 4).
struct unsaturated : error {
    using error::error;
};

}  // namespace kmv
