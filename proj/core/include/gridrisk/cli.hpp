#pragma once

namespace gridrisk {

// Entry point behind the gridrisk binary. Exit codes: 0 success, 1 usage
// error, 2 data/validation error, 3 numeric failure.
int dispatch(int argc, const char* const* argv);

}  // namespace gridrisk
