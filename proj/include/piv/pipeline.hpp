#pragma once

#include "piv/config.hpp"
#include "piv/error.hpp"
#include "piv/parallel.hpp"

#include <string>
#include <vector>

namespace piv {

/// A failure inside run_pipeline, tagged with the stage that raised it.
class StageError : public Error {
public:
  StageError(std::string stage, int exit_code, const std::string &what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)), exit_code_(exit_code) {}

  const std::string &stage() const { return stage_; }
  /// 1 config/parameter, 2 I/O, 3 numeric.
  int exit_code() const { return exit_code_; }

private:
  std::string stage_;
  int exit_code_;
};

/// Exit code for an exception escaping any toolkit call.
int exit_code_for(const std::exception &e);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<StageTiming> timings;
  int nx = 0;
  int ny = 0;
  std::size_t nodes = 0;
  std::size_t measured = 0;
  std::size_t flagged = 0;
  std::size_t interpolated = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

/// load -> grid check -> preprocess -> multipass correlate -> postprocess ->
/// derive -> write. Files are first written as `<name>.partial` and renamed
/// once every stage has succeeded; report.json is written last.
RunReport run_pipeline(const PipelineConfig &cfg, ExecPolicy policy = ExecPolicy::parallel);

} // namespace piv
