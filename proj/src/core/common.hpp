#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace crowdlod {

// Thrown when a file cannot be read, written or parsed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative numeric procedure fails (divergence, separation,
// singular system).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Runs fn(i) for i in [0, n). Splits the range across worker threads unless
// CROWDLOD_THREADS=1 (or n is small). fn must only touch state owned by its
// own index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Worker count: CROWDLOD_THREADS if set and valid, else hardware concurrency.
unsigned thread_count();

} // namespace crowdlod
