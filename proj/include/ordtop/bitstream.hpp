#pragma once

// Infinite binary sequences with a deterministic generator and a memoized
// prefix. Streams built from a (preperiod, period) description carry that
// symbolic form with them; eventual-constancy questions are only answerable
// for such streams, never from a finite prefix of an opaque generator.

#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace ordtop {

class BitStream {
 public:
  using Generator = std::function<bool(std::size_t)>;

  struct Periodic {
    std::vector<bool> preperiod;
    std::vector<bool> period;  // nonempty

    bool bit(std::size_t i) const {
      if (i < preperiod.size()) return preperiod[i];
      return period[(i - preperiod.size()) % period.size()];
    }
  };

  BitStream() : state_(std::make_shared<State>()) {
    state_->symbolic = Periodic{{}, {false}};
  }

  static BitStream from_generator(Generator gen) {
    auto st = std::make_shared<State>();
    st->gen = std::move(gen);
    return BitStream(std::move(st));
  }

  static BitStream periodic(std::vector<bool> preperiod, std::vector<bool> period) {
    auto st = std::make_shared<State>();
    st->symbolic = Periodic{std::move(preperiod), std::move(period)};
    return BitStream(std::move(st));
  }

  static BitStream constant(bool v) { return periodic({}, {v}); }

  bool bit(std::size_t i) const {
    auto& s = *state_;
    if (s.symbolic) return s.symbolic->bit(i);
    // memoize so the generator is consulted exactly once per index
    while (s.memo.size() <= i) s.memo.push_back(s.gen(s.memo.size()) ? 1 : 0);
    return s.memo[i] != 0;
  }

  const std::optional<Periodic>& symbolic() const { return state_->symbolic; }

  std::size_t materialized() const {
    return state_->symbolic ? 0 : state_->memo.size();
  }

  // "0101...[periodic]" style rendering of the first n bits.
  std::string prefix_string(std::size_t n) const {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += bit(i) ? '1' : '0';
    out += "...";
    if (state_->symbolic) {
      const auto& p = *state_->symbolic;
      bool constant_tail = true;
      for (bool b : p.period) constant_tail &= (b == p.period[0]);
      out += constant_tail ? (p.period[0] ? "[tail 1]" : "[tail 0]") : "[periodic]";
    } else {
      out += "[opaque]";
    }
    return out;
  }

 private:
  struct State {
    Generator gen;
    std::vector<char> memo;
    std::optional<Periodic> symbolic;
  };
  explicit BitStream(std::shared_ptr<State> st) : state_(std::move(st)) {}
  std::shared_ptr<State> state_;
};

// A point of the binary sequence space; the element type of the codec.
using CantorPoint = BitStream;

// Bitwise exclusive or, lazily. When both operands are symbolic the result is
// too (preperiods aligned, periods repeated to their lcm), so endpoint
// analysis survives the group operation.
inline BitStream xor_add(const BitStream& x, const BitStream& y) {
  const auto& sx = x.symbolic();
  const auto& sy = y.symbolic();
  if (sx && sy) {
    std::size_t pre = std::max(sx->preperiod.size(), sy->preperiod.size());
    std::size_t per = std::lcm(sx->period.size(), sy->period.size());
    if (pre + per <= 1u << 16) {
      std::vector<bool> preperiod(pre), period(per);
      for (std::size_t i = 0; i < pre; ++i) preperiod[i] = sx->bit(i) ^ sy->bit(i);
      for (std::size_t j = 0; j < per; ++j)
        period[j] = sx->bit(pre + j) ^ sy->bit(pre + j);
      return BitStream::periodic(std::move(preperiod), std::move(period));
    }
  }
  return BitStream::from_generator([x, y](std::size_t i) { return x.bit(i) ^ y.bit(i); });
}

}  // namespace ordtop
