#pragma once

#include <stdexcept>
#include <string>

namespace satd {

// Fatal pipeline error. `stage` names the pipeline step that failed
// ("mine", "extract", "track", "cluster", "analyze", "report").
class Error : public std::runtime_error {
public:
  Error(std::string stage, const std::string &message)
      : std::runtime_error(message), stage_(std::move(stage)) {}

  const std::string &stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

} // namespace satd
