#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>

#include "causalbounds/error.hpp"

namespace causalbounds {

/// Cooperative cancellation with an optional deadline. Copies share state.
/// A default-constructed token never fires.
class CancelToken {
 public:
  using Clock = std::chrono::steady_clock;

  CancelToken() = default;

  static CancelToken with_timeout(std::chrono::duration<double> timeout) {
    CancelToken t;
    t.flag_ = std::make_shared<std::atomic<bool>>(false);
    t.deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(timeout);
    return t;
  }
  static CancelToken manual() {
    CancelToken t;
    t.flag_ = std::make_shared<std::atomic<bool>>(false);
    return t;
  }

  void cancel() const {
    if (flag_) flag_->store(true);
  }

  bool timed_out() const { return deadline_ && Clock::now() >= *deadline_; }
  bool cancelled() const { return flag_ && flag_->load(); }

  void throw_if_stopped() const {
    if (cancelled()) throw Error(ErrorKind::Cancelled, "CANCELLED", "computation cancelled");
    if (timed_out()) throw Error(ErrorKind::Timeout, "TIMEOUT", "computation exceeded its time limit");
  }

 private:
  std::shared_ptr<std::atomic<bool>> flag_;
  std::optional<Clock::time_point> deadline_;
};

}  // namespace causalbounds
