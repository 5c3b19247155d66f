#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gridrisk {

// Exit-code mapping used by the CLI: UsageError -> 1, DataError -> 2,
// NumericError -> 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Collects non-fatal diagnostics (renormalized allocation fractions,
// zero-variance channels, ...). A null sink is valid everywhere and drops
// the message.
class WarningSink {
 public:
  void add(std::string message) { messages_.push_back(std::move(message)); }
  const std::vector<std::string>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }
  std::size_t size() const { return messages_.size(); }

 private:
  std::vector<std::string> messages_;
};

inline void warn(WarningSink* sink, std::string message) {
  if (sink != nullptr) sink->add(std::move(message));
}

}  // namespace gridrisk
