#pragma once

// Lazily materialized, memoized streams. at(i) is stable: once an element has
// been produced it never changes, and a finite stream remembers where it
// ended. Instances share state through a shared_ptr; confine each instance to
// one thread of control at a time.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace ordtop {

template <typename T>
class Stream {
 public:
  using Puller = std::function<std::optional<T>()>;

  Stream() : state_(std::make_shared<State>()) { state_->ended = true; }

  explicit Stream(Puller next) : state_(std::make_shared<State>()) {
    state_->next = std::move(next);
  }

  static Stream of(std::vector<T> items) {
    Stream s;
    s.state_->memo = std::move(items);
    s.state_->ended = true;
    return s;
  }

  static Stream from_indexed(std::function<std::optional<T>(std::size_t)> gen) {
    auto counter = std::make_shared<std::size_t>(0);
    return Stream([gen = std::move(gen), counter]() { return gen((*counter)++); });
  }

  // nullopt once the stream is exhausted.
  std::optional<T> at(std::size_t i) const {
    auto& s = *state_;
    while (s.memo.size() <= i) {
      if (s.ended) return std::nullopt;
      auto next = s.next();
      if (!next) {
        s.ended = true;
        return std::nullopt;
      }
      s.memo.push_back(std::move(*next));
    }
    return s.memo[i];
  }

  // Elements produced so far (not necessarily the whole stream).
  std::size_t materialized() const { return state_->memo.size(); }
  bool known_finite() const { return state_->ended; }

  Stream filter(std::function<bool(const T&)> pred) const {
    auto src = *this;
    auto idx = std::make_shared<std::size_t>(0);
    return Stream([src, pred = std::move(pred), idx]() -> std::optional<T> {
      while (true) {
        auto v = src.at((*idx)++);
        if (!v) return std::nullopt;
        if (pred(*v)) return v;
      }
    });
  }

  template <typename U>
  Stream<U> map(std::function<U(const T&)> fn) const {
    auto src = *this;
    auto idx = std::make_shared<std::size_t>(0);
    return Stream<U>([src, fn = std::move(fn), idx]() -> std::optional<U> {
      auto v = src.at((*idx)++);
      if (!v) return std::nullopt;
      return fn(*v);
    });
  }

  std::vector<T> take(std::size_t n) const {
    std::vector<T> out;
    for (std::size_t i = 0; i < n; ++i) {
      auto v = at(i);
      if (!v) break;
      out.push_back(*v);
    }
    return out;
  }

 private:
  struct State {
    Puller next;
    std::vector<T> memo;
    bool ended = false;
  };
  std::shared_ptr<State> state_;
};

}  // namespace ordtop
