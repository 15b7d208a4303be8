// Copyright 2026 The RTLSeek Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// External simulator hook: hand the design to an arbitrary command (a real
// simulator wrapper script) and map its exit code to a verdict. Exit 0 =
// pass, nonzero = fail, spawn failure or timeout = sim_error.

#pragma once

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "rtlseek/sim.hpp"

namespace rtlseek::sim {

/// Write `source` into `workdir`, substitute the file path for `{design}`
/// in the command template, and run it through /bin/sh. Stdout and stderr
/// are captured into the outcome's message (truncated to 64 KiB).
inline SimOutcome run_external(const std::string& source,
                               const std::string& command_template,
                               const std::string& workdir,
                               double timeout_seconds = 30.0) {
  SimOutcome out;
  auto fail = [&](const std::string& msg) {
    out.verdict = Verdict::sim_error;
    out.message = msg;
    return out;
  };

  static constexpr std::string_view kSlot = "{design}";
  if (command_template.find(kSlot) == std::string::npos)
    return fail("command template lacks a {design} placeholder");

  static std::atomic<unsigned> counter{0};
  std::string stem = workdir + "/design_" + std::to_string(::getpid()) + "_" +
                     std::to_string(counter.fetch_add(1));
  std::string design_path = stem + ".v";
  std::string log_path = stem + ".log";
  {
    std::ofstream f(design_path, std::ios::binary);
    if (!f) return fail("cannot write design file " + design_path);
    f << source;
  }

  std::string command = command_template;
  for (std::size_t at = command.find(kSlot); at != std::string::npos;
       at = command.find(kSlot, at + design_path.size()))
    command.replace(at, kSlot.size(), design_path);

  pid_t pid = ::fork();
  if (pid < 0) return fail(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      ::dup2(fd, 1);
      ::dup2(fd, 2);
      ::close(fd);
    }
    ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    ::_exit(127);
  }

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_seconds);
  int status = 0;
  bool timed_out = false;
  for (;;) {
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) return fail(std::string("waitpid failed: ") +
                           std::strerror(errno));
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  {
    std::ifstream f(log_path, std::ios::binary);
    if (f) {
      constexpr std::size_t cap = 64 * 1024;
      std::string text((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
      if (text.size() > cap) text.resize(cap);
      out.message = std::move(text);
    }
  }
  std::remove(design_path.c_str());
  std::remove(log_path.c_str());

  if (timed_out) {
    out.verdict = Verdict::sim_error;
    out.message = "external simulator timed out\n" + out.message;
    return out;
  }
  if (!WIFEXITED(status)) {
    out.verdict = Verdict::sim_error;
    out.message = "external simulator terminated abnormally\n" + out.message;
    return out;
  }
  int code = WEXITSTATUS(status);
  if (code == 127) {
    out.verdict = Verdict::sim_error;
    out.message = "external simulator command not found\n" + out.message;
    return out;
  }
  out.verdict = code == 0 ? Verdict::pass : Verdict::fail;
  return out;
}

} // namespace rtlseek::sim
