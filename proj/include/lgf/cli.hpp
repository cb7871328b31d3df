#pragma once

/// @file cli.hpp
/// @brief The lgflow command-line driver.
///
///   lgflow run         --config PATH [--out-dir PATH] [--quiet]
///   lgflow resume      --config PATH --snapshot PATH [--out-dir PATH] [--quiet]
///   lgflow verify      --snapshot PATH [--config PATH] [--quiet]
///   lgflow convergence --config PATH [--axis space|time] [--out-dir PATH] [--quiet]
///   lgflow check-eos   [--config PATH] [--quiet]
///
/// Exit codes: 0 success, 1 invalid input or failed check, 2 numerical
/// failure during integration.

#include <filesystem>
#include <iosfwd>
#include <string>

namespace lgf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Exclusive ownership of an output directory, held through a lock file
/// created with O_EXCL and removed on destruction.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

  static constexpr const char* kFileName = ".lgflow.lock";

 private:
  std::filesystem::path path_;
};

}  // namespace lgf
