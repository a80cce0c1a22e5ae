#pragma once

#include <doctest.h>

#include "voxbetti/error.hpp"

// Passes only when `expr` throws voxbetti::Error carrying `expected`.
#define CHECK_ERROR_CODE(expr, expected)                                   \
  do {                                                                     \
    bool thrown_ = false;                                                  \
    try {                                                                  \
      (void)(expr);                                                        \
    } catch (const voxbetti::Error& e_) {                                  \
      thrown_ = true;                                                      \
      CHECK_MESSAGE(e_.code() == (expected), "got: " << e_.what());        \
    }                                                                      \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);               \
  } while (0)
